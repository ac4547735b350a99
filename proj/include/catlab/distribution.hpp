// Long-distance entanglement distribution through the length-dependent
// depolarizing channel: bare separability threshold and the catalyst
// requirements at an intermediate node.

#pragma once

#include "catlab/convex_split.hpp"
#include "catlab/embezzling.hpp"

namespace catlab {

// Without catalysts the distributed pair stays entangled only for
// lengths below (ln 3)/alpha.
inline double distribution_threshold_bare(double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("distribution_threshold_bare: alpha must be positive");
    return std::log(3.0) / alpha;
}

// Separability boundary located by bisecting the partial-transpose
// witness of the distributed state; independent of the closed form.
inline double ppt_threshold_bisection(double alpha, double rel_tol = 1e-9) {
    if (alpha <= 0.0) throw std::invalid_argument("ppt_threshold_bisection: alpha must be positive");
    auto witness = [alpha](double l) {
        return ppt_min_eigenvalue(choi(depolarizing_length(alpha, l)).rho);
    };
    double lo = 0.0, hi = 1.0 / alpha;
    while (witness(hi) < 0.0) hi *= 2.0;
    while ((hi - lo) > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (witness(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct DistributionScenario {
    double alpha = 0.0;  // damping per unit length
    double l = 0.0;      // total Alice-Bob distance
    double s = 0.0;      // intermediate node position, 0 <= s <= l
};

struct DistributionPoint {
    double s = 0.0;
    double keep_weight = 0.0;  // e^{-alpha s}
    DensityOperator rho_ar;    // state shared between Alice and the node
    double ppt_witness = 0.0;
    bool entangled = false;
    // Catalyst requirements to reach joint fidelity 1 - target_epsilon.
    bool cs_feasible = false;
    std::int64_t cs_copies = 0;
    double cs_consumption = 0.0;
    std::int64_t emb_schmidt_rank = 0;
};

inline void validate(const DistributionScenario& sc) {
    if (sc.alpha <= 0.0) throw std::invalid_argument("DistributionScenario: alpha must be positive");
    if (sc.l < 0.0 || sc.s < 0.0 || sc.s > sc.l)
        throw std::invalid_argument("DistributionScenario: require 0 <= s <= l");
}

// State at the node plus the post-processing options there: copies of
// tau for the convex-split protocol (best of n_candidates random
// full-rank states) and the Schmidt rank for the embezzling protocol.
inline DistributionPoint distribution_point(const DistributionScenario& sc, double target_epsilon,
                                            int n_candidates, std::uint64_t seed) {
    validate(sc);
    DistributionPoint pt;
    pt.s = sc.s;
    pt.keep_weight = std::exp(-sc.alpha * sc.s);
    const ChoiState cs = choi(depolarizing_length(sc.alpha, sc.s));
    pt.rho_ar = cs.rho;
    pt.ppt_witness = ppt_min_eigenvalue(pt.rho_ar);
    pt.entangled = pt.ppt_witness < 0.0;

    const DescentReport rep = n_min_random(cs, n_candidates, target_epsilon, seed);
    pt.cs_feasible = rep.feasible;
    if (rep.feasible) {
        pt.cs_copies = rep.n_best;
        pt.cs_consumption = consumption_bound_cs(rep.best_k, rep.n_best);
    }
    pt.emb_schmidt_rank = required_schmidt_rank(2, target_epsilon);
    return pt;
}

}  // namespace catlab
