// Embezzling-state protocol: the 1/sqrt(j) catalyst family, the index
// permutation that concentrates its entanglement, achieved fidelities,
// consumption (closed form and amplitude-level), and rank requirements.

#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "catlab/measures.hpp"

namespace catlab {

// Harmonic number H_M, summed small-to-large.
inline double harmonic(std::int64_t m) {
    double h = 0.0;
    for (std::int64_t j = m; j >= 1; --j) h += 1.0 / static_cast<double>(j);
    return h;
}

// |tau^E> = (1/sqrt(c_M)) sum_j (1/sqrt(j)) |jj>. The Schmidt vector is
// the working representation; the dense [M, M] form is materialized on
// demand.
struct EmbezzlingState {
    int M = 0;
    double c_M = 0.0;
    Eigen::VectorXd schmidt;  // schmidt(j-1) = 1/sqrt(c_M * j)

    PureState pure() const {
        ComplexVector amps = ComplexVector::Zero(static_cast<Eigen::Index>(M) * M);
        for (int j = 0; j < M; ++j) amps(static_cast<Eigen::Index>(j) * M + j) = schmidt(j);
        return PureState(std::move(amps), Dims{M, M});
    }
};

inline EmbezzlingState embezzling_state(int M) {
    if (M < 1) throw std::invalid_argument("embezzling_state: M must be at least 1");
    EmbezzlingState out;
    out.M = M;
    out.c_M = harmonic(M);
    out.schmidt.resize(M);
    for (int j = 1; j <= M; ++j) out.schmidt(j - 1) = 1.0 / std::sqrt(out.c_M * j);
    return out;
}

// Schmidt rank needed for joint error epsilon: ceil(m^{1/(1-sqrt(1-eps))}).
inline std::int64_t required_schmidt_rank(int m, double epsilon) {
    if (m < 2) throw std::invalid_argument("required_schmidt_rank: m must be at least 2");
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("required_schmidt_rank: epsilon must lie in (0, 1)");
    const double exponent = 1.0 / (1.0 - std::sqrt(1.0 - epsilon));
    if (exponent * std::log2(static_cast<double>(m)) > 62.0)
        throw std::overflow_error("required_schmidt_rank: rank exceeds 2^62 at this epsilon");
    return ceil_snapped(std::pow(static_cast<double>(m), exponent));
}

// Schmidt rank needed to keep catalyst consumption below delta.
inline std::int64_t min_rank_for_consumption(int m, double delta) {
    if (m < 2) throw std::invalid_argument("min_rank_for_consumption: m must be at least 2");
    if (delta <= 0.0) throw std::invalid_argument("min_rank_for_consumption: delta must be positive");
    const double exponent = 2.0 / (delta * delta);
    if (exponent * std::log2(static_cast<double>(m)) > 62.0)
        throw std::overflow_error("min_rank_for_consumption: rank exceeds 2^62 at this delta");
    return ceil_snapped(std::pow(static_cast<double>(m), exponent));
}

// The permutation behind U_AC on 1-based pairs (i, j) in {1..m} x {1..M}:
// flatten t = (i-1)M + j, then split t with the fast axis of size m.
inline std::pair<int, int> embezzle_index_map(int m, int M, int i, int j) {
    const std::int64_t t = static_cast<std::int64_t>(i - 1) * M + j;
    const int l = static_cast<int>((t + m - 1) / m);  // ceil(t/m)
    const int k = static_cast<int>(t - static_cast<std::int64_t>(l - 1) * m);
    return {k, l};
}

inline std::pair<int, int> embezzle_index_map_inverse(int m, int M, int k, int l) {
    const std::int64_t t = static_cast<std::int64_t>(l - 1) * m + k;
    const int i = static_cast<int>((t + M - 1) / M);  // ceil(t/M)
    const int j = static_cast<int>(t - static_cast<std::int64_t>(i - 1) * M);
    return {i, j};
}

// omega_{ij} = 1 / sqrt(ceil(((i-1)M+j)/m) * m * c_M), the pre-image of
// phi+_m ⊗ tau^E under the permutation.
inline double omega_coefficient(int m, int M, int i, int j, double c_M) {
    const std::int64_t t = static_cast<std::int64_t>(i - 1) * M + j;
    const std::int64_t l = (t + m - 1) / m;
    return 1.0 / std::sqrt(static_cast<double>(l) * m * c_M);
}

// |omega> = sum_{ij} omega_{ij} |ii>|jj> on dims [m, M, m, M] ordered
// (A, C, B, C').
inline PureState omega_state(int m, int M) {
    if (m < 2 || M < m) throw std::invalid_argument("omega_state: need m >= 2 and M >= m");
    const Eigen::Index mm = static_cast<Eigen::Index>(m) * M;
    if (mm > 4096) throw std::invalid_argument("omega_state: dense budget exceeded (mM > 4096)");
    const double c_M = harmonic(M);
    ComplexVector amps = ComplexVector::Zero(mm * mm);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= M; ++j) {
            const Eigen::Index a = i - 1, c = j - 1;
            const Eigen::Index flat = ((a * M + c) * m + a) * M + c;
            amps(flat) = omega_coefficient(m, M, i, j, c_M);
        }
    return PureState(std::move(amps), Dims{m, M, m, M});
}

using IndexMap = std::function<std::pair<int, int>(int, int)>;

// Largest amplitude deviation between the transported omega and
// phi+_m ⊗ tau^E. The injectable map exists so tests can verify that a
// corrupted permutation is caught.
inline double transport_max_deviation(int m, int M, const IndexMap& map) {
    if (m < 2 || M < m) throw std::invalid_argument("transport_max_deviation: need m >= 2 and M >= m");
    const double c_M = harmonic(M);
    Eigen::MatrixXd image = Eigen::MatrixXd::Zero(m, M);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= M; ++j) {
            const auto [k, l] = map(i, j);
            if (k < 1 || k > m || l < 1 || l > M)
                return std::numeric_limits<double>::infinity();
            image(k - 1, l - 1) += omega_coefficient(m, M, i, j, c_M);
        }
    const double root_m = std::sqrt(static_cast<double>(m));
    double dev = 0.0;
    for (int k = 1; k <= m; ++k)
        for (int l = 1; l <= M; ++l) {
            const double target = 1.0 / (root_m * std::sqrt(c_M * l));
            dev = std::max(dev, std::abs(image(k - 1, l - 1) - target));
        }
    return dev;
}

inline double transport_max_deviation(int m, int M) {
    return transport_max_deviation(m, M, [m, M](int i, int j) { return embezzle_index_map(m, M, i, j); });
}

inline bool unitary_transport_check(int m, int M) { return transport_max_deviation(m, M) < 1e-10; }

struct ProtocolFidelity {
    double inner = 0.0;              // <11 ⊗ tau^E, omega>
    double fidelity = 0.0;           // inner^2
    double inner_lower_bound = 0.0;  // (log M - log m) / log M
};

// Achieved fidelity F_U(mu, phi+_m ⊗ tau^E) via the overlap with omega.
inline ProtocolFidelity protocol_fidelity(int m, std::int64_t M) {
    if (m < 2 || M < m) throw std::invalid_argument("protocol_fidelity: need m >= 2 and M >= m");
    const double c_M = harmonic(M);
    double inner = 0.0;
    for (std::int64_t j = M; j >= 1; --j) {
        const std::int64_t l = (j + m - 1) / m;  // ceil(j/m)
        inner += 1.0 / (std::sqrt(c_M * j) * std::sqrt(l * m * c_M));
    }
    ProtocolFidelity out;
    out.inner = inner;
    out.fidelity = inner * inner;
    out.inner_lower_bound = M == m ? 0.0 : (std::log2(static_cast<double>(M)) - std::log2(static_cast<double>(m))) / std::log2(static_cast<double>(M));
    return out;
}

// mu = (U_AC ⊗ U_BC')(|11><11| ⊗ tau^E)(U ⊗ U)^dag as a pure state on
// dims [m, M, m, M]; only M amplitudes are nonzero.
inline PureState protocol_state_mu(int m, int M) {
    if (m < 2 || M < m) throw std::invalid_argument("protocol_state_mu: need m >= 2 and M >= m");
    const Eigen::Index mm = static_cast<Eigen::Index>(m) * M;
    if (mm > 4096) throw std::invalid_argument("protocol_state_mu: dense budget exceeded (mM > 4096)");
    const EmbezzlingState tau = embezzling_state(M);
    ComplexVector amps = ComplexVector::Zero(mm * mm);
    for (int j = 1; j <= M; ++j) {
        const auto [k, l] = embezzle_index_map(m, M, 1, j);
        const Eigen::Index a = k - 1, c = l - 1;
        const Eigen::Index flat = ((a * M + c) * m + a) * M + c;
        amps(flat) = tau.schmidt(j - 1);
    }
    return PureState(std::move(amps), Dims{m, M, m, M});
}

struct ConsumptionRecord {
    double exact = 0.0;   // closed-form purified distance P(xi^E, tau^E)
    double bound = 0.0;   // sqrt(2 log_M m)
    double direct = 0.0;  // amplitude-level evaluation of P(Tr_AB[mu], tau^E)
    bool mismatch = false;
};

// The O(M) half of the consumption computation: contracts mu against
// tau^E slot by slot. Usable at ranks where the O(M^2) closed form is
// not.
inline ConsumptionRecord consumption_direct_only(int m, std::int64_t M) {
    if (m < 2 || M < m) throw std::invalid_argument("consumption_direct_only: need m >= 2 and M >= m");
    const double c_M = harmonic(M);
    Eigen::VectorXd group = Eigen::VectorXd::Zero(m);
    for (std::int64_t j = 1; j <= M; ++j) {
        const std::int64_t l = (j + m - 1) / m;
        const int k = static_cast<int>(j - (l - 1) * m);
        group(k - 1) += 1.0 / (c_M * std::sqrt(static_cast<double>(j) * l));
    }
    ConsumptionRecord rec;
    rec.bound = std::sqrt(2.0 * std::log(static_cast<double>(m)) / std::log(static_cast<double>(M)));
    rec.direct = std::sqrt(std::max(0.0, 1.0 - group.squaredNorm()));
    rec.exact = rec.direct;
    return rec;
}

// Consumption of the embezzling catalyst. The direct path contracts the
// pure mu against tau^E slot by slot, which is the partial-trace
// fidelity evaluated on the support of Tr_AB[mu]; the closed form is
// checked against it and any disagreement beyond 1e-8 is flagged.
inline ConsumptionRecord consumption_exact(int m, int M) {
    if (m < 2 || M < m) throw std::invalid_argument("consumption_exact: need m >= 2 and M >= m");
    const double c_M = harmonic(M);

    double f_closed = 0.0;
    for (int t = 1; t <= M; ++t) {
        const int big_k = (t + m - 1) / m;  // ceil(t/m)
        double term = 1.0 / (static_cast<double>(t) * big_k);
        for (int i = 1; i <= big_k - 1; ++i) {
            const double k_i = t - ((t - 1) / m) * m + static_cast<double>(i - 1) * m;
            term += 2.0 / std::sqrt(static_cast<double>(i) * k_i * t * big_k);
        }
        f_closed += term;
    }
    f_closed /= c_M * c_M;

    // F(Tr_AB[mu], tau^E) = sum_k |sum_{j: k_j = k} a_j * tauE_{l_j}|^2.
    ConsumptionRecord rec = consumption_direct_only(m, M);
    rec.exact = std::sqrt(std::max(0.0, 1.0 - f_closed));
    rec.mismatch = std::abs(rec.exact - rec.direct) > 1e-8;
    return rec;
}

// Channel-independent capacity lower bound (1 - sqrt(1-eps)) log2(d_c - 1)
// achievable with a catalyst of dimension d_c.
inline double capacity_lower_bound(std::int64_t d_c, double epsilon) {
    if (d_c < 2) throw std::invalid_argument("capacity_lower_bound: d_c must be at least 2");
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw std::invalid_argument("capacity_lower_bound: epsilon must lie in (0, 1)");
    return (1.0 - std::sqrt(1.0 - epsilon)) * std::log2(static_cast<double>(d_c - 1));
}

}  // namespace catlab
