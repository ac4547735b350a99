// Dense complex linear algebra over small Hilbert spaces: Kronecker
// products, Hermitian eigendecompositions, PSD square roots and their
// support-restricted inverses.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "catlab/common.hpp"

namespace catlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline bool all_finite(const ComplexMatrix& m) {
    return m.allFinite();
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = kHermTol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

// Kronecker product a ⊗ b.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

struct EigSystem {
    Eigen::VectorXd values;   // ascending
    ComplexMatrix vectors;    // columns, unitary
};

// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
inline EigSystem hermitian_eig(const ComplexMatrix& m, double tol = kHermTol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eig: matrix not square");
    if (!is_hermitian(m, tol)) throw std::invalid_argument("hermitian_eig: matrix not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eig: solver failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

inline Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m, double tol = kHermTol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("hermitian_eigenvalues: matrix not square");
    if (!is_hermitian(m, tol)) throw std::invalid_argument("hermitian_eigenvalues: matrix not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("hermitian_eigenvalues: solver failed to converge");
    return solver.eigenvalues();
}

namespace detail {
// Applies f to the eigenvalues of a PSD matrix, rejecting eigenvalues
// below -psd_tol, clamping the rest into [0, inf).
template <typename F>
ComplexMatrix psd_function(const ComplexMatrix& m, F&& f, const char* who) {
    const EigSystem es = hermitian_eig(m);
    const double scale = std::max(1.0, std::abs(es.values(es.values.size() - 1)));
    Eigen::VectorXd mapped(es.values.size());
    for (Eigen::Index i = 0; i < es.values.size(); ++i) {
        double lambda = es.values(i);
        if (lambda < -kPsdTol * scale)
            throw std::invalid_argument(std::string(who) + ": matrix has a negative eigenvalue");
        mapped(i) = f(std::max(lambda, 0.0), scale);
    }
    return es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
}
}  // namespace detail

// Principal square root of a PSD matrix.
inline ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
    return detail::psd_function(m, [](double l, double) { return std::sqrt(l); }, "matrix_sqrt_psd");
}

// Inverse square root on the support; zero on the kernel. Eigenvalues at
// or below kSupportTol (relative to the largest) count as kernel.
inline ComplexMatrix pinv_sqrt_on_support(const ComplexMatrix& m) {
    return detail::psd_function(
        m, [](double l, double scale) { return l > kSupportTol * scale ? 1.0 / std::sqrt(l) : 0.0; },
        "pinv_sqrt_on_support");
}

// Orthogonal projector onto the support of a PSD matrix.
inline ComplexMatrix support_projector(const ComplexMatrix& m) {
    return detail::psd_function(
        m, [](double l, double scale) { return l > kSupportTol * scale ? 1.0 : 0.0; },
        "support_projector");
}

inline ComplexMatrix pauli_x() {
    ComplexMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline ComplexMatrix pauli_y() {
    ComplexMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

inline ComplexMatrix pauli_z() {
    ComplexMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

}  // namespace catlab
