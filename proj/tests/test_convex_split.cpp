#include <catch2/catch_amalgamated.hpp>

#include "catlab/convex_split.hpp"
#include "catlab/superdense.hpp"
#include "test_helpers.hpp"

using namespace catlab;
using catlab::testing::max_abs_diff;

namespace {

ComplexMatrix kron_power(const ComplexMatrix& m, int n) {
    ComplexMatrix out = m;
    for (int i = 1; i < n; ++i) out = tensor(out, m);
    return out;
}

DensityOperator isotropic_tau(double p) {
    const DensityOperator phi = max_entangled(2).to_density();
    return DensityOperator(p * phi.mat + (1 - p) * maximally_mixed({2, 2}).mat, Dims{2, 2});
}

// Independent grid evaluation of the copy-count minimization for the
// isotropic family tau(p) = p*phi+ + (1-p)*I/4 against a pure Choi
// state, where both D_max and the fidelity have closed forms.
std::int64_t grid_oracle_nmin_isotropic(double epsilon) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
        const double p = i * 1e-3;
        const double fid = p + (1 - p) / 4.0;
        const double margin = std::sqrt(epsilon) - std::sqrt(1 - fid);
        if (margin <= 0) continue;
        const double pow2k = 1.0 / fid;  // 2^{D_max(phi+ || tau(p))}
        best = std::min(best, pow2k / (margin * margin));
    }
    return std::isfinite(best) ? static_cast<std::int64_t>(std::ceil(best)) : -1;
}

}  // namespace

TEST_CASE("convex split degenerate cases") {
    auto rng = rng_stream(41);
    DensityOperator tau = random_full_rank_state(4, rng);
    tau.dims = Dims{2, 2};

    // rho == tau collapses to tau^{(x)n}.
    const DensityOperator mu = convex_split_state(tau, tau, 3);
    REQUIRE(max_abs_diff(mu.mat, kron_power(tau.mat, 3)) < 1e-15);

    // n = 1 returns rho itself.
    DensityOperator rho = random_full_rank_state(4, rng);
    rho.dims = Dims{2, 2};
    REQUIRE(max_abs_diff(convex_split_state(rho, tau, 1).mat, rho.mat) == 0.0);
}

TEST_CASE("convex split rejects mismatched inputs and blown budgets") {
    auto rng = rng_stream(42);
    const DensityOperator a = random_full_rank_state(4, rng);
    const DensityOperator b = random_full_rank_state(2, rng);
    REQUIRE_THROWS_AS(convex_split_state(a, b, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(convex_split_state(a, a, 7), std::invalid_argument);
    REQUIRE_THROWS_AS(convex_split_state(a, a, 0), std::invalid_argument);
}

TEST_CASE("splitting a Choi state against an isotropic reference") {
    const DensityOperator rho = max_entangled(2).to_density();
    const DensityOperator tau = isotropic_tau(0.5);
    const double k = dmax(rho, tau);
    // <phi+|tau^{-1}|phi+> = 1/0.625 for this reference.
    REQUIRE(k == Catch::Approx(std::log2(1.6)).margin(1e-10));

    const DensityOperator mu = convex_split_state(rho, tau, 3);
    const double dist = purified_distance(mu.mat, kron_power(tau.mat, 3));
    REQUIRE(dist <= convex_split_bound(k, 3) + 1e-9);
    REQUIRE(dist <= std::sqrt(2.0 / 3.0) + 1e-9);
}

TEST_CASE("convex-split bound values") {
    REQUIRE(convex_split_bound(0.0, 1) == Catch::Approx(1.0));
    REQUIRE(convex_split_bound(0.0, 4) == Catch::Approx(0.5));
    REQUIRE(convex_split_bound(2.0, 4) == Catch::Approx(1.0));  // clipped
}

TEST_CASE("direct verification of the splitting bound on random instances") {
    auto rng = rng_stream(43);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
        DensityOperator rho = random_full_rank_state(4, rng);
        DensityOperator zeta = random_full_rank_state(4, rng);
        rho.dims = zeta.dims = Dims{2, 2};
        // Mix tau toward rho so the bound is exercised at small k too.
        const double w = 0.9 * unif(rng);
        const DensityOperator tau(w * rho.mat + (1 - w) * zeta.mat, Dims{2, 2});
        const double k = dmax(rho, tau);
        for (int n = 1; n <= 4; ++n) {
            const DensityOperator mu = convex_split_state(rho, tau, n);
            REQUIRE(is_hermitian(mu.mat, 1e-10));
            REQUIRE(mu.mat.trace().real() == Catch::Approx(1.0).margin(1e-10));
            const double dist = purified_distance(mu.mat, kron_power(tau.mat, n));
            REQUIRE(dist <= convex_split_bound(k, n) + 1e-9);
        }
    }
}

TEST_CASE("mu is a valid density operator") {
    auto rng = rng_stream(44);
    DensityOperator rho = random_full_rank_state(4, rng);
    DensityOperator tau = random_full_rank_state(4, rng);
    rho.dims = tau.dims = Dims{2, 2};
    const DensityOperator mu = convex_split_state(rho, tau, 3);
    REQUIRE(mu.is_valid_density(1e-10));
}

TEST_CASE("catalyst marginal stays close to tau^(n-1)") {
    auto rng = rng_stream(45);
    const DensityOperator rho = max_entangled(2).to_density();
    const DensityOperator tau = isotropic_tau(0.5);
    const double k = dmax(rho, tau);
    const DensityOperator mu = convex_split_state(rho, tau, 3);
    // System slot is the first pair of subsystems.
    const DensityOperator marginal = partial_trace(mu, {2, 3, 4, 5});
    REQUIRE(purified_distance(marginal.mat, kron_power(tau.mat, 2)) <=
            convex_split_bound(k, 3) + 1e-9);
}

TEST_CASE("copy-count requirement values") {
    REQUIRE(theorem2_copies(0.0, 0.5) == 8);
    REQUIRE(theorem2_copies(1.0, 0.25) == 32);
    REQUIRE_THROWS_AS(theorem2_copies(1.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(theorem2_copies(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("copy-count requirement for a dephasing Choi state") {
    const ChoiState cs = choi(dephasing(0.4));
    const NminResult r = n_min_for_zeta(cs, maximally_mixed({2, 2}), 0.1);
    REQUIRE(r.feasible);
    const double k = TauFamily(cs.rho, maximally_mixed({2, 2})).dmax_at(r.p_star);
    const std::int64_t copies = theorem2_copies(k, 0.1);
    REQUIRE(copies == static_cast<std::int64_t>(std::ceil(std::exp2(k + 2.0) / 0.1 - 1e-9)));
}

TEST_CASE("protocol error bound") {
    REQUIRE(protocol_error_bound(0.0, 1'000'000'000'000LL, 0.0) < 1e-5);
    REQUIRE(protocol_error_bound(1.3, 64, 0.0) == Catch::Approx(std::sqrt(std::exp2(1.3) / 64)));

    // In the regime of the copy-count rule the bound lands below sqrt(eps).
    for (double k : {0.0, 0.7, 2.0, 5.0}) {
        for (double eps : {0.02, 0.1, 0.4, 0.9}) {
            const std::int64_t n = theorem2_copies(k, eps);
            const double bound = protocol_error_bound(k, n, std::sqrt(eps) / 2.0);
            REQUIRE(bound <= std::sqrt(eps) + 1e-9);
        }
    }
}

TEST_CASE("copy minimization for the noiseless Choi state") {
    const KrausChannel id({ComplexMatrix::Identity(2, 2)}, 2, 2);
    const ChoiState cs = choi(id);
    const double eps = 0.04;
    const NminResult r = n_min_for_zeta(cs, maximally_mixed({2, 2}), eps);
    REQUIRE(r.feasible);
    // Feasibility needs (1-p) * 3/4 < eps, i.e. p > 0.9467.
    REQUIRE(r.p_star > 0.946);

    // Never worse than the independent grid evaluation, and the returned
    // pair satisfies the constraint it came from.
    REQUIRE(r.n_min <= grid_oracle_nmin_isotropic(eps));
    const TauFamily fam(cs.rho, maximally_mixed({2, 2}));
    const double lhs = std::sqrt(std::exp2(fam.dmax_at(r.p_star)) / static_cast<double>(r.n_min)) +
                       std::sqrt(1.0 - fam.fidelity_to_phi(r.p_star));
    REQUIRE(lhs <= std::sqrt(eps) + 1e-9);
}

TEST_CASE("copy minimization is monotone in the error budget") {
    const ChoiState cs = choi(dephasing(0.4));
    const DensityOperator mm = maximally_mixed({2, 2});
    const TauFamily fam(cs.rho, mm);
    std::int64_t prev = std::numeric_limits<std::int64_t>::max();
    for (double eps : {0.05, 0.1, 0.2, 0.4, 0.8, 0.95}) {
        const NminResult r = fam.n_min(eps);
        REQUIRE(r.feasible);
        REQUIRE(r.n_min <= prev);
        prev = r.n_min;
    }
}

TEST_CASE("copy minimization reports infeasibility for tiny budgets") {
    const ChoiState cs = choi(dephasing(0.4));
    const NminResult r = n_min_for_zeta(cs, maximally_mixed({2, 2}), 1e-9);
    REQUIRE_FALSE(r.feasible);
}

TEST_CASE("descent ratio vanishes when the pool repeats the benchmark") {
    const ChoiState cs = choi(dephasing(0.4));
    std::vector<TauFamily> pool;
    pool.emplace_back(cs.rho, maximally_mixed({2, 2}));
    pool.emplace_back(cs.rho, maximally_mixed({2, 2}));
    const DescentReport rep = descent_report(pool, 0.1);
    REQUIRE(rep.feasible);
    REQUIRE(rep.theta == 0.0);
    REQUIRE(rep.n_mm == rep.n_best);
}

TEST_CASE("descent ratio is monotone under nested candidate pools") {
    const ChoiState cs = choi(dephasing(0.4));
    const DescentReport small = n_min_random(cs, 5, 0.1, 2024);
    const DescentReport large = n_min_random(cs, 20, 0.1, 2024);
    REQUIRE(small.feasible);
    REQUIRE(large.feasible);
    REQUIRE(large.theta >= small.theta);
    REQUIRE(large.theta >= 0.0);
    REQUIRE(small.n_mm == large.n_mm);
}

TEST_CASE("consumption copy requirements") {
    REQUIRE(min_copies_for_consumption(0.0, 1.0) == 1);
    REQUIRE(min_copies_for_consumption(1.0, 0.1) == 200);
}

TEST_CASE("error reduction from a catalytic post-state") {
    const ChoiState cs = choi(dephasing(0.75));
    REQUIRE(delta_p_err(cs, cs.rho) == Catch::Approx(0.0).margin(1e-12));

    const DensityOperator phi = max_entangled(2).to_density();
    const double f = uhlmann_fidelity(cs.rho, max_entangled(2));
    REQUIRE(delta_p_err(cs, phi) == Catch::Approx(1.0 - f).margin(1e-10));
}

TEST_CASE("embezzling post-state improves a noisy dephasing link") {
    const ChoiState cs = choi(dephasing(0.75));
    const DensityOperator post = catalytic_sdc_state(2, 256);
    REQUIRE(delta_p_err(cs, post) > 0.0);
}
