// Kraus-form quantum channels: dephasing, amplitude damping, the
// length-parameterized depolarizing channel, channel application on a
// chosen subsystem, and Choi states.

#pragma once

#include <vector>

#include "catlab/measures.hpp"

namespace catlab {

struct KrausChannel {
    std::vector<ComplexMatrix> kraus;
    int d_in = 0;
    int d_out = 0;

    KrausChannel() = default;
    KrausChannel(std::vector<ComplexMatrix> ops, int din, int dout)
        : kraus(std::move(ops)), d_in(din), d_out(dout) {
        if (kraus.empty()) throw std::invalid_argument("KrausChannel: empty operator list");
        for (const auto& k : kraus)
            if (k.rows() != d_out || k.cols() != d_in)
                throw std::invalid_argument("KrausChannel: operator shape mismatch");
        ComplexMatrix sum = ComplexMatrix::Zero(d_in, d_in);
        for (const auto& k : kraus) sum += k.adjoint() * k;
        if ((sum - ComplexMatrix::Identity(d_in, d_in)).cwiseAbs().maxCoeff() > 1e-10)
            throw std::invalid_argument("KrausChannel: operators are not trace preserving");
    }

    ComplexMatrix operator()(const ComplexMatrix& rho) const {
        ComplexMatrix out = ComplexMatrix::Zero(d_out, d_out);
        for (const auto& k : kraus) out += k * rho * k.adjoint();
        return out;
    }
};

// Z_p: keeps the input with probability p, conjugates by sigma_z otherwise.
inline KrausChannel dephasing(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("dephasing: p must lie in [0, 1]");
    std::vector<ComplexMatrix> ops;
    ops.push_back(std::sqrt(p) * ComplexMatrix::Identity(2, 2));
    ops.push_back(std::sqrt(1.0 - p) * pauli_z());
    return KrausChannel(std::move(ops), 2, 2);
}

inline KrausChannel amplitude_damping(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("amplitude_damping: p must lie in [0, 1]");
    ComplexMatrix k0(2, 2), k1(2, 2);
    k0 << 1, 0, 0, std::sqrt(1.0 - p);
    k1 << 0, std::sqrt(p), 0, 0;
    return KrausChannel({k0, k1}, 2, 2);
}

// rho -> keep * rho + (1 - keep) I/2, realized with the identity branch
// plus the uniform Pauli twirl for the replacer.
inline KrausChannel depolarizing_keep(double keep) {
    if (keep < 0.0 || keep > 1.0) throw std::invalid_argument("depolarizing_keep: weight must lie in [0, 1]");
    const double q = 0.25 * (1.0 - keep);
    std::vector<ComplexMatrix> ops;
    ops.push_back(std::sqrt(keep) * ComplexMatrix::Identity(2, 2));
    ops.push_back(std::sqrt(q) * ComplexMatrix::Identity(2, 2));
    ops.push_back(std::sqrt(q) * pauli_x());
    ops.push_back(std::sqrt(q) * pauli_y());
    ops.push_back(std::sqrt(q) * pauli_z());
    return KrausChannel(std::move(ops), 2, 2);
}

// N_l(rho) = e^{-alpha l} rho + (1 - e^{-alpha l}) I/2.
inline KrausChannel depolarizing_length(double alpha, double l) {
    if (alpha < 0.0) throw std::invalid_argument("depolarizing_length: alpha must be nonnegative");
    if (l < 0.0) throw std::invalid_argument("depolarizing_length: length must be nonnegative");
    return depolarizing_keep(std::exp(-alpha * l));
}

// Applies the channel to one subsystem, identity on the rest.
inline DensityOperator apply(const KrausChannel& ch, const DensityOperator& rho, int subsystem) {
    if (subsystem < 0 || static_cast<size_t>(subsystem) >= rho.dims.size())
        throw std::out_of_range("apply: subsystem index out of range");
    if (rho.dims[subsystem] != ch.d_in)
        throw std::invalid_argument("apply: subsystem dimension does not match channel input");

    Eigen::Index before = 1, after = 1;
    for (int i = 0; i < subsystem; ++i) before *= rho.dims[i];
    for (size_t i = subsystem + 1; i < rho.dims.size(); ++i) after *= rho.dims[i];

    const ComplexMatrix id_before = ComplexMatrix::Identity(before, before);
    const ComplexMatrix id_after = ComplexMatrix::Identity(after, after);

    Dims out_dims = rho.dims;
    out_dims[subsystem] = ch.d_out;
    ComplexMatrix out = ComplexMatrix::Zero(before * ch.d_out * after, before * ch.d_out * after);
    for (const auto& k : ch.kraus) {
        const ComplexMatrix lifted = tensor(tensor(id_before, k), id_after);
        out += lifted * rho.mat * lifted.adjoint();
    }
    return DensityOperator(std::move(out), std::move(out_dims));
}

struct ChoiState {
    DensityOperator rho;  // dims [d_in, d_out]
};

// (id ⊗ N) applied to the maximally entangled state on d_in ⊗ d_in.
inline ChoiState choi(const KrausChannel& ch) {
    const DensityOperator phi = max_entangled(ch.d_in).to_density();
    return ChoiState{apply(ch, phi, 1)};
}

}  // namespace catlab
