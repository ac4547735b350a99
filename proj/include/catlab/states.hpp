// Density operators and pure states over multipartite Hilbert spaces,
// with partial traces and the random full-rank ensemble.

#pragma once

#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "catlab/matrix.hpp"

namespace catlab {

using Dims = std::vector<int>;

inline Eigen::Index total_dim(const Dims& dims) {
    Eigen::Index d = 1;
    for (int x : dims) {
        if (x < 1) throw std::invalid_argument("subsystem dimensions must be positive");
        d *= x;
    }
    return d;
}

inline Dims concat_dims(const Dims& a, const Dims& b) {
    Dims out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

struct DensityOperator {
    ComplexMatrix mat;
    Dims dims;

    DensityOperator() = default;
    DensityOperator(ComplexMatrix m, Dims d) : mat(std::move(m)), dims(std::move(d)) {
        if (mat.rows() != mat.cols()) throw std::invalid_argument("DensityOperator: matrix not square");
        if (total_dim(dims) != mat.rows())
            throw std::invalid_argument("DensityOperator: dims product does not match matrix order");
        if (!all_finite(mat)) throw std::invalid_argument("DensityOperator: non-finite entries");
    }

    Eigen::Index dim() const { return mat.rows(); }

    // Hermitian, eigenvalues >= -tol, unit trace. Costs an eigendecomposition.
    bool is_valid_density(double tol = kPsdTol) const {
        if (!is_hermitian(mat, tol)) return false;
        if (std::abs(mat.trace().real() - 1.0) > tol || std::abs(mat.trace().imag()) > tol) return false;
        const Eigen::VectorXd ev = hermitian_eigenvalues((mat + mat.adjoint()) / 2.0);
        return ev.minCoeff() >= -tol;
    }

    double min_eigenvalue() const {
        return hermitian_eigenvalues((mat + mat.adjoint()) / 2.0).minCoeff();
    }
};

struct PureState {
    ComplexVector amps;
    Dims dims;

    PureState() = default;
    PureState(ComplexVector a, Dims d) : amps(std::move(a)), dims(std::move(d)) {
        if (total_dim(dims) != amps.size())
            throw std::invalid_argument("PureState: dims product does not match amplitude count");
        if (!amps.allFinite()) throw std::invalid_argument("PureState: non-finite amplitudes");
    }

    double norm() const { return amps.norm(); }

    DensityOperator to_density() const {
        return DensityOperator(amps * amps.adjoint(), dims);
    }
};

inline DensityOperator maximally_mixed(const Dims& dims) {
    const Eigen::Index d = total_dim(dims);
    return DensityOperator(ComplexMatrix::Identity(d, d) / static_cast<double>(d), dims);
}

// (1/sqrt(d)) sum_i |ii>, dims [d, d].
inline PureState max_entangled(int d) {
    if (d < 2) throw std::invalid_argument("max_entangled: d must be at least 2");
    ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(d) * d);
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) amps(static_cast<Eigen::Index>(i) * d + i) = a;
    return PureState(std::move(amps), Dims{d, d});
}

inline ComplexVector basis_vector(Eigen::Index dim, Eigen::Index i) {
    ComplexVector v = ComplexVector::Zero(dim);
    v(i) = 1.0;
    return v;
}

namespace detail {

// Splits flat indices over `dims` into a kept part and a traced part so
// that flat = keep_offset[ik] + trace_offset[it].
struct TraceIndexing {
    std::vector<Eigen::Index> keep_offsets, trace_offsets;
    Dims kept_dims;

    TraceIndexing(const Dims& dims, const std::vector<int>& keep) {
        std::vector<bool> is_kept(dims.size(), false);
        for (int k : keep) {
            if (k < 0 || static_cast<size_t>(k) >= dims.size())
                throw std::out_of_range("partial_trace: subsystem index out of range");
            if (is_kept[k]) throw std::invalid_argument("partial_trace: duplicate subsystem index");
            is_kept[k] = true;
        }
        if (keep.empty()) throw std::invalid_argument("partial_trace: keep set must be nonempty");

        std::vector<Eigen::Index> strides(dims.size());
        Eigen::Index s = 1;
        for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
            strides[i] = s;
            s *= dims[i];
        }

        Eigen::Index keep_dim = 1, trace_dim = 1;
        std::vector<int> kept_idx, traced_idx;
        for (size_t i = 0; i < dims.size(); ++i) {
            if (is_kept[i]) {
                kept_idx.push_back(static_cast<int>(i));
                kept_dims.push_back(dims[i]);
                keep_dim *= dims[i];
            } else {
                traced_idx.push_back(static_cast<int>(i));
                trace_dim *= dims[i];
            }
        }

        auto build = [&](const std::vector<int>& idx, Eigen::Index count) {
            std::vector<Eigen::Index> offsets(count, 0);
            for (Eigen::Index flat = 0; flat < count; ++flat) {
                Eigen::Index rem = flat, off = 0;
                for (int pos = static_cast<int>(idx.size()) - 1; pos >= 0; --pos) {
                    const int sub = idx[pos];
                    off += (rem % dims[sub]) * strides[sub];
                    rem /= dims[sub];
                }
                offsets[flat] = off;
            }
            return offsets;
        };
        keep_offsets = build(kept_idx, keep_dim);
        trace_offsets = build(traced_idx, trace_dim);
    }
};

}  // namespace detail

// Traces out every subsystem not listed in `keep`. Kept subsystems stay
// in their original relative order.
inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
    const detail::TraceIndexing ix(rho.dims, keep);
    const Eigen::Index nk = static_cast<Eigen::Index>(ix.keep_offsets.size());
    ComplexMatrix out = ComplexMatrix::Zero(nk, nk);
    for (Eigen::Index i = 0; i < nk; ++i)
        for (Eigen::Index j = 0; j < nk; ++j) {
            Complex acc(0, 0);
            for (Eigen::Index t : ix.trace_offsets)
                acc += rho.mat(ix.keep_offsets[i] + t, ix.keep_offsets[j] + t);
            out(i, j) = acc;
        }
    return DensityOperator(std::move(out), ix.kept_dims);
}

// Reduced density matrix of a pure state without forming the full
// |psi><psi| first.
inline DensityOperator partial_trace(const PureState& psi, const std::vector<int>& keep) {
    const detail::TraceIndexing ix(psi.dims, keep);
    const Eigen::Index nk = static_cast<Eigen::Index>(ix.keep_offsets.size());
    ComplexMatrix out = ComplexMatrix::Zero(nk, nk);
    for (Eigen::Index t : ix.trace_offsets) {
        for (Eigen::Index i = 0; i < nk; ++i) {
            const Complex ai = psi.amps(ix.keep_offsets[i] + t);
            if (ai == Complex(0, 0)) continue;
            for (Eigen::Index j = 0; j < nk; ++j)
                out(i, j) += ai * std::conj(psi.amps(ix.keep_offsets[j] + t));
        }
    }
    return DensityOperator(std::move(out), ix.kept_dims);
}

// Ginibre-induced state G G^dag / Tr, resampled until numerically full
// rank (at most 100 attempts).
inline DensityOperator random_full_rank_state(int d, std::mt19937_64& rng) {
    if (d < 2) throw std::invalid_argument("random_full_rank_state: d must be at least 2");
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        ComplexMatrix g(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
        ComplexMatrix rho = g * g.adjoint();
        rho /= rho.trace().real();
        rho = (rho + ComplexMatrix(rho.adjoint())) / 2.0;
        const Eigen::VectorXd ev = hermitian_eigenvalues(rho);
        if (ev.minCoeff() > kSupportTol * ev.maxCoeff()) return DensityOperator(std::move(rho), Dims{d});
    }
    throw std::runtime_error("random_full_rank_state: failed to draw a full-rank state");
}

}  // namespace catlab
