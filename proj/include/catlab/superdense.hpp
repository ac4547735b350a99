// Superdense coding capacity and the post-catalysis state shared
// between sender and receiver.

#pragma once

#include "catlab/embezzling.hpp"

namespace catlab {

struct SdcCapacity {
    double value = 0.0;               // bits per channel use
    int d = 0;                        // local dimension
    double conditional_entropy = 0.0; // H(A|B)
};

// C(rho_AB) = log2 d - H(A|B).
inline SdcCapacity sdc_capacity(const DensityOperator& rho_ab) {
    if (rho_ab.dims.size() != 2 || rho_ab.dims[0] != rho_ab.dims[1])
        throw std::invalid_argument("sdc_capacity: state must be bipartite with equal local dimensions");
    SdcCapacity out;
    out.d = rho_ab.dims[0];
    out.conditional_entropy = conditional_entropy(rho_ab);
    out.value = std::log2(static_cast<double>(out.d)) - out.conditional_entropy;
    return out;
}

// AB marginal left behind by the embezzling protocol with target rank d
// and catalyst Schmidt rank M: supported on span{|ii>} with entries
// (1/c_M) sum_k 1/sqrt((i+kd)(j+kd)), k up to floor((M-max(i,j))/d).
inline DensityOperator catalytic_sdc_state(int d, int M) {
    if (d < 2) throw std::invalid_argument("catalytic_sdc_state: d must be at least 2");
    if (M < d) throw std::invalid_argument("catalytic_sdc_state: M must be at least d");
    const double c_M = harmonic(M);
    ComplexMatrix rho = ComplexMatrix::Zero(static_cast<Eigen::Index>(d) * d,
                                            static_cast<Eigen::Index>(d) * d);
    for (int i = 1; i <= d; ++i)
        for (int j = 1; j <= d; ++j) {
            const int k_max = (M - std::max(i, j)) / d;
            double acc = 0.0;
            for (int k = k_max; k >= 0; --k)
                acc += 1.0 / std::sqrt(static_cast<double>(i + k * d) * (j + k * d));
            const Eigen::Index row = static_cast<Eigen::Index>(i - 1) * d + (i - 1);
            const Eigen::Index col = static_cast<Eigen::Index>(j - 1) * d + (j - 1);
            rho(row, col) = acc / c_M;
        }
    return DensityOperator(std::move(rho), Dims{d, d});
}

}  // namespace catlab
