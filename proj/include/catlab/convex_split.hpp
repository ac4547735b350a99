// Convex-split machinery: the mixed state that hides one copy of rho
// among n slots of tau, its distance bounds, copy-count requirements,
// and the search for the cheapest tau = p*phi+ + (1-p)*zeta family.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "catlab/channels.hpp"

namespace catlab {

// Output Hilbert space is dim(rho)^n; dense construction is capped here.
inline constexpr Eigen::Index kConvexSplitDimBudget = 4096;

// mu = (1/n) sum_i tau ⊗ ... ⊗ rho_i ⊗ ... ⊗ tau.
inline DensityOperator convex_split_state(const DensityOperator& rho, const DensityOperator& tau, int n) {
    if (n < 1) throw std::invalid_argument("convex_split_state: n must be positive");
    if (rho.dim() != tau.dim() || rho.dims != tau.dims)
        throw std::invalid_argument("convex_split_state: rho and tau dimensions differ");
    Eigen::Index out_dim = 1;
    for (int i = 0; i < n; ++i) {
        out_dim *= rho.dim();
        if (out_dim > kConvexSplitDimBudget)
            throw std::invalid_argument("convex_split_state: dense dimension budget exceeded");
    }

    Dims out_dims;
    for (int i = 0; i < n; ++i) out_dims = concat_dims(out_dims, rho.dims);

    ComplexMatrix acc = ComplexMatrix::Zero(out_dim, out_dim);
    for (int slot = 0; slot < n; ++slot) {
        ComplexMatrix term = slot == 0 ? rho.mat : tau.mat;
        for (int i = 1; i < n; ++i) term = tensor(term, i == slot ? rho.mat : tau.mat);
        acc += term;
    }
    return DensityOperator(acc / static_cast<double>(n), std::move(out_dims));
}

// sqrt(2^k / n), clipped into [0, 1] since it reports a purified distance.
inline double convex_split_bound(double k, std::int64_t n) {
    if (k < 0.0 || n < 1) throw std::invalid_argument("convex_split_bound: k must be >= 0 and n >= 1");
    return std::min(1.0, std::sqrt(std::exp2(k) / static_cast<double>(n)));
}

// Copies needed so the protocol error stays below epsilon: ceil(2^{k+2}/eps).
inline std::int64_t theorem2_copies(double k, double epsilon) {
    if (epsilon <= 0.0 || epsilon >= 1.0) throw std::invalid_argument("theorem2_copies: epsilon must lie in (0, 1)");
    if (k < 0.0) throw std::invalid_argument("theorem2_copies: k must be nonnegative");
    return ceil_snapped(std::exp2(k + 2.0) / epsilon);
}

// Triangle-inequality chain: P(mu, phi+ ⊗ tau^(n-1)) <= sqrt(2^k/n) + P(tau, phi+).
inline double protocol_error_bound(double k, std::int64_t n, double tau_phi_dist) {
    if (tau_phi_dist < 0.0) throw std::invalid_argument("protocol_error_bound: distance must be nonnegative");
    return std::sqrt(std::exp2(k) / static_cast<double>(n)) + tau_phi_dist;
}

// Catalyst consumption bound P(Tr_AB[mu], tau^(n-1)) <= sqrt(2^k/n).
inline double consumption_bound_cs(double k, std::int64_t n) { return convex_split_bound(k, n); }

// Copies needed to keep consumption below delta: ceil(2^k / delta^2).
inline std::int64_t min_copies_for_consumption(double k, double delta) {
    if (delta <= 0.0) throw std::invalid_argument("min_copies_for_consumption: delta must be positive");
    return std::max<std::int64_t>(1, ceil_snapped(std::exp2(k) / (delta * delta)));
}

// Error reduction achieved by a catalytic post-state, in fidelity units.
inline double delta_p_err(const ChoiState& choi_state, const DensityOperator& post_state) {
    if (choi_state.rho.dims != post_state.dims)
        throw std::invalid_argument("delta_p_err: dimension mismatch");
    const PureState phi = max_entangled(choi_state.rho.dims[0]);
    return uhlmann_fidelity(post_state, phi) - uhlmann_fidelity(choi_state.rho, phi);
}

struct NminResult {
    bool feasible = false;
    std::int64_t n_min = 0;
    double p_star = 0.0;
};

// The one-parameter family tau(p) = p*phi+ + (1-p)*zeta for a fixed
// full-rank zeta, with the copy-count minimization over p. D_max values
// along the search grid are cached so that sweeps over epsilon reuse
// them.
class TauFamily {
  public:
    static constexpr double kGridStep = 1e-3;
    // Keeps tau numerically full rank during refinement near p -> 1.
    static constexpr double kMaxRefineP = 1.0 - 1e-6;

    TauFamily(DensityOperator choi_rho, DensityOperator zeta)
        : choi_(std::move(choi_rho)), zeta_(std::move(zeta)) {
        if (choi_.dims != zeta_.dims) throw std::invalid_argument("TauFamily: dimension mismatch");
        if (choi_.dims.size() != 2 || choi_.dims[0] != choi_.dims[1])
            throw std::invalid_argument("TauFamily: states must be bipartite with equal local dimensions");
        phi_ = max_entangled(choi_.dims[0]);
        phi_overlap_ = (phi_.amps.adjoint() * zeta_.mat * phi_.amps)(0).real();
    }

    DensityOperator tau(double p) const {
        return DensityOperator(p * (phi_.amps * phi_.amps.adjoint()) + (1.0 - p) * zeta_.mat, choi_.dims);
    }

    double fidelity_to_phi(double p) const { return p + (1.0 - p) * phi_overlap_; }

    double dmax_at(double p) const { return dmax(choi_, tau(p)); }

    // Real-valued copy count before the final ceiling; +inf if p is
    // infeasible for this epsilon.
    double objective(double p, double epsilon) const {
        const double dist = std::sqrt(std::max(0.0, 1.0 - fidelity_to_phi(p)));
        const double margin = std::sqrt(epsilon) - dist;
        if (margin <= 0.0) return std::numeric_limits<double>::infinity();
        return std::exp2(dmax_at(p)) / (margin * margin);
    }

    NminResult n_min(double epsilon) const {
        if (epsilon <= 0.0 || epsilon >= 1.0) throw std::invalid_argument("TauFamily::n_min: epsilon must lie in (0, 1)");
        ensure_grid();
        const double root_eps = std::sqrt(epsilon);

        double best_obj = std::numeric_limits<double>::infinity();
        double best_p = 0.0;
        for (size_t i = 0; i < grid_p_.size(); ++i) {
            const double dist = grid_dist_[i];
            if (dist >= root_eps) continue;
            const double margin = root_eps - dist;
            const double obj = grid_pow2k_[i] / (margin * margin);
            if (obj < best_obj) {
                best_obj = obj;
                best_p = grid_p_[i];
            }
        }
        if (!std::isfinite(best_obj)) return {};

        // One golden-section pass in the bracket around the best grid point.
        const double lo = std::max(0.0, best_p - kGridStep);
        const double hi = std::min(best_p + kGridStep, kMaxRefineP);
        constexpr double inv_phi = 0.6180339887498949;
        double a = lo, b = hi;
        double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
        double f1 = objective(x1, epsilon), f2 = objective(x2, epsilon);
        for (int it = 0; it < 48; ++it) {
            if (f1 <= f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = objective(x1, epsilon);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = objective(x2, epsilon);
            }
        }
        const double refined_p = f1 <= f2 ? x1 : x2;
        const double refined_obj = std::min(f1, f2);
        if (refined_obj < best_obj) {
            best_obj = refined_obj;
            best_p = refined_p;
        }
        return {true, std::max<std::int64_t>(1, ceil_snapped(best_obj)), best_p};
    }

  private:
    void ensure_grid() const {
        if (!grid_p_.empty()) return;
        const int steps = static_cast<int>(std::lround(1.0 / kGridStep));
        grid_p_.reserve(steps);
        grid_dist_.reserve(steps);
        grid_pow2k_.reserve(steps);
        for (int i = 0; i < steps; ++i) {
            const double p = i * kGridStep;
            grid_p_.push_back(p);
            grid_dist_.push_back(std::sqrt(std::max(0.0, 1.0 - fidelity_to_phi(p))));
            grid_pow2k_.push_back(std::exp2(dmax_at(p)));
        }
    }

    DensityOperator choi_, zeta_;
    PureState phi_;
    double phi_overlap_ = 0.0;
    mutable std::vector<double> grid_p_, grid_dist_, grid_pow2k_;
};

inline NminResult n_min_for_zeta(const ChoiState& choi_state, const DensityOperator& zeta, double epsilon) {
    return TauFamily(choi_state.rho, zeta).n_min(epsilon);
}

struct DescentReport {
    std::int64_t n_mm = 0;    // benchmark: zeta = maximally mixed
    std::int64_t n_best = 0;  // best over the candidate pool
    double theta = 0.0;       // (n_mm - n_best) / n_mm
    double epsilon = 0.0;
    int sample_count = 0;
    bool feasible = false;
    int best_id = 0;  // 0 = maximally mixed benchmark, 1..N = random candidates
    double best_p = 0.0;
    double best_k = 0.0;       // D_max(choi || tau(best_p)) for the winning family
    double best_fid_phi = 0.0; // F_U(tau(best_p), phi+)
};

// Candidate pool with the maximally mixed benchmark at id 0.
inline std::vector<TauFamily> descent_candidates(const ChoiState& choi_state, int n_random,
                                                 std::uint64_t seed) {
    if (n_random < 0) throw std::invalid_argument("descent_candidates: sample count must be nonnegative");
    const int d = static_cast<int>(choi_state.rho.dim());
    std::vector<TauFamily> out;
    out.reserve(n_random + 1);
    out.emplace_back(choi_state.rho, maximally_mixed(choi_state.rho.dims));
    for (int i = 0; i < n_random; ++i) {
        auto rng = rng_stream(seed, static_cast<std::uint64_t>(i));
        DensityOperator zeta = random_full_rank_state(d, rng);
        zeta.dims = choi_state.rho.dims;
        out.emplace_back(choi_state.rho, std::move(zeta));
    }
    return out;
}

inline DescentReport descent_report(const std::vector<TauFamily>& candidates, double epsilon) {
    if (candidates.empty()) throw std::invalid_argument("descent_report: empty candidate pool");
    DescentReport rep;
    rep.epsilon = epsilon;
    rep.sample_count = static_cast<int>(candidates.size()) - 1;

    const NminResult mm = candidates.front().n_min(epsilon);
    if (!mm.feasible) return rep;
    rep.n_mm = mm.n_min;
    rep.n_best = mm.n_min;
    rep.best_p = mm.p_star;
    for (size_t i = 1; i < candidates.size(); ++i) {
        const NminResult r = candidates[i].n_min(epsilon);
        if (r.feasible && r.n_min < rep.n_best) {
            rep.n_best = r.n_min;
            rep.best_id = static_cast<int>(i);
            rep.best_p = r.p_star;
        }
    }
    rep.best_k = candidates[rep.best_id].dmax_at(rep.best_p);
    rep.best_fid_phi = candidates[rep.best_id].fidelity_to_phi(rep.best_p);
    rep.theta = static_cast<double>(rep.n_mm - rep.n_best) / static_cast<double>(rep.n_mm);
    rep.feasible = true;
    return rep;
}

// Draws N random full-rank candidates (plus the maximally mixed
// benchmark) and reports the descent ratio theta(N, epsilon).
inline DescentReport n_min_random(const ChoiState& choi_state, int n_candidates, double epsilon,
                                  std::uint64_t seed) {
    if (n_candidates < 1) throw std::invalid_argument("n_min_random: need at least one candidate");
    return descent_report(descent_candidates(choi_state, n_candidates, seed), epsilon);
}

}  // namespace catlab
