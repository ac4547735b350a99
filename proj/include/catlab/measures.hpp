// Distinguishability measures: Uhlmann fidelity, purified distance,
// max-relative entropy with its feasibility probe, entropies, and the
// partial-transpose entanglement witness.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "catlab/states.hpp"

namespace catlab {

namespace detail {

inline void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}

inline bool nearly_pure(const ComplexMatrix& rho) {
    return std::abs((rho * rho).trace().real() - 1.0) < 1e-12;
}

inline ComplexVector dominant_eigenvector(const ComplexMatrix& rho) {
    const EigSystem es = hermitian_eig(rho);
    return es.vectors.col(es.vectors.cols() - 1);
}

}  // namespace detail

// F_U(rho, sigma) = (Tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2. Falls back
// to the overlap <psi|rho|psi> whenever one argument is pure.
inline double uhlmann_fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    detail::require_same_dim(rho, sigma, "uhlmann_fidelity");
    if (detail::nearly_pure(sigma)) {
        const ComplexVector psi = detail::dominant_eigenvector(sigma);
        return std::clamp((psi.adjoint() * rho * psi)(0).real(), 0.0, 1.0);
    }
    if (detail::nearly_pure(rho)) {
        const ComplexVector psi = detail::dominant_eigenvector(rho);
        return std::clamp((psi.adjoint() * sigma * psi)(0).real(), 0.0, 1.0);
    }
    const ComplexMatrix root = matrix_sqrt_psd(sigma);
    const ComplexMatrix inner = root * rho * root;
    const Eigen::VectorXd ev = hermitian_eigenvalues((inner + inner.adjoint()) / 2.0);
    double tr = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) tr += std::sqrt(std::max(ev(i), 0.0));
    return std::clamp(tr * tr, 0.0, 1.0);
}

inline double uhlmann_fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    return uhlmann_fidelity(rho.mat, sigma.mat);
}

inline double uhlmann_fidelity(const DensityOperator& rho, const PureState& psi) {
    if (rho.dim() != psi.amps.size()) throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
    return std::clamp((psi.amps.adjoint() * rho.mat * psi.amps)(0).real(), 0.0, 1.0);
}

inline double uhlmann_fidelity(const PureState& a, const PureState& b) {
    if (a.amps.size() != b.amps.size()) throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
    return std::norm((a.amps.adjoint() * b.amps)(0));
}

template <typename A, typename B>
double purified_distance(const A& rho, const B& sigma) {
    return std::sqrt(std::max(0.0, 1.0 - uhlmann_fidelity(rho, sigma)));
}

// Max-relative entropy D_max(rho||sigma) in bits; +infinity when the
// support of rho leaks outside the support of sigma.
inline double dmax(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
    detail::require_same_dim(rho, sigma, "dmax");
    const ComplexMatrix proj = support_projector(sigma);
    const ComplexMatrix id = ComplexMatrix::Identity(sigma.rows(), sigma.cols());
    const double leak = ((id - proj) * rho).trace().real();
    if (leak > kSupportTol) return std::numeric_limits<double>::infinity();
    const ComplexMatrix s = pinv_sqrt_on_support(sigma);
    const ComplexMatrix inner = s * rho * s;
    const Eigen::VectorXd ev = hermitian_eigenvalues((inner + inner.adjoint()) / 2.0);
    return std::log2(std::max(ev.maxCoeff(), std::numeric_limits<double>::min()));
}

inline double dmax(const DensityOperator& rho, const DensityOperator& sigma) {
    return dmax(rho.mat, sigma.mat);
}

// Feasibility probe for the program behind D_max: true iff
// rho <= 2^lambda sigma within tolerance. Used as the independent check
// on the eigenvalue route above.
inline bool dmax_feasibility_check(const ComplexMatrix& rho, const ComplexMatrix& sigma, double lambda,
                                   double tol = 1e-9) {
    detail::require_same_dim(rho, sigma, "dmax_feasibility_check");
    const ComplexMatrix gap = std::exp2(lambda) * sigma - rho;
    const Eigen::VectorXd ev = hermitian_eigenvalues((gap + gap.adjoint()) / 2.0);
    return ev.minCoeff() >= -tol;
}

inline bool dmax_feasibility_check(const DensityOperator& rho, const DensityOperator& sigma, double lambda,
                                   double tol = 1e-9) {
    return dmax_feasibility_check(rho.mat, sigma.mat, lambda, tol);
}

// Von Neumann entropy in bits; eigenvalues below the support cutoff are
// treated as exact zeros.
inline double von_neumann_entropy(const ComplexMatrix& rho) {
    const Eigen::VectorXd ev = hermitian_eigenvalues(rho);
    const double cutoff = kSupportTol * std::max(ev.maxCoeff(), 1e-300);
    double h = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > cutoff) h -= ev(i) * std::log2(ev(i));
    return std::max(h, 0.0);
}

inline double von_neumann_entropy(const DensityOperator& rho) { return von_neumann_entropy(rho.mat); }

// H(A|B) = H(AB) - H(B) for a bipartite state.
inline double conditional_entropy(const DensityOperator& rho_ab) {
    if (rho_ab.dims.size() != 2) throw std::invalid_argument("conditional_entropy: state must be bipartite");
    const DensityOperator rho_b = partial_trace(rho_ab, {1});
    return von_neumann_entropy(rho_ab) - von_neumann_entropy(rho_b);
}

// Partial transpose over the second subsystem.
inline ComplexMatrix partial_transpose_b(const DensityOperator& rho_ab) {
    if (rho_ab.dims.size() != 2) throw std::invalid_argument("partial_transpose_b: state must be bipartite");
    const int da = rho_ab.dims[0], db = rho_ab.dims[1];
    ComplexMatrix out(rho_ab.dim(), rho_ab.dim());
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            for (int a = 0; a < db; ++a)
                for (int b = 0; b < db; ++b)
                    out(i * db + a, j * db + b) = rho_ab.mat(i * db + b, j * db + a);
    return out;
}

// Minimum eigenvalue of the partial transpose; negative iff entangled
// for 2x2 and 2x3 systems.
inline double ppt_min_eigenvalue(const DensityOperator& rho_ab) {
    const ComplexMatrix pt = partial_transpose_b(rho_ab);
    return hermitian_eigenvalues((pt + pt.adjoint()) / 2.0).minCoeff();
}

}  // namespace catlab
