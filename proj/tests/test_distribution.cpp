#include <catch2/catch_amalgamated.hpp>

#include "catlab/distribution.hpp"
#include "test_helpers.hpp"

using namespace catlab;

TEST_CASE("bare threshold closed form") {
    REQUIRE(distribution_threshold_bare(std::log(3.0)) == Catch::Approx(1.0));
    REQUIRE(distribution_threshold_bare(0.01) == Catch::Approx(109.8612288668).margin(1e-6));
    REQUIRE_THROWS_AS(distribution_threshold_bare(0.0), std::invalid_argument);
}

TEST_CASE("bisection on the witness finds the bare threshold") {
    for (double alpha : {0.005, 0.01, 0.05}) {
        const double expected = std::log(3.0) / alpha;
        const double located = ppt_threshold_bisection(alpha, 1e-9);
        REQUIRE(std::abs(located - expected) / expected < 1e-6);
    }
}

TEST_CASE("node state along the channel") {
    const double alpha = 0.02;
    const DistributionScenario at_zero{alpha, 200.0, 0.0};
    const DistributionPoint p0 = distribution_point(at_zero, 0.1, 3, 7);
    REQUIRE(p0.ppt_witness == Catch::Approx(-0.5).margin(1e-12));
    REQUIRE(uhlmann_fidelity(p0.rho_ar, max_entangled(2)) == Catch::Approx(1.0).margin(1e-12));

    const double threshold = distribution_threshold_bare(alpha);
    const DistributionPoint pt =
        distribution_point({alpha, 200.0, threshold}, 0.1, 3, 7);
    REQUIRE(std::abs(pt.ppt_witness) < 1e-9);
}

TEST_CASE("witness decreases strictly in the kept weight and crosses zero once") {
    const double alpha = 0.01;
    // Larger s means smaller kept weight e^{-alpha s}, so the witness
    // rises monotonically from -0.5 toward +0.25 with one sign change.
    double prev = -1.0;
    int sign_changes = 0;
    bool first = true;
    for (int i = 0; i <= 60; ++i) {
        const double s = i * 5.0;
        const DistributionScenario sc{alpha, 300.0, s};
        validate(sc);
        const double w =
            ppt_min_eigenvalue(choi(depolarizing_length(alpha, s)).rho);
        if (!first && ((prev < 0) != (w < 0))) ++sign_changes;
        REQUIRE(w > prev);
        prev = w;
        first = false;
    }
    REQUIRE(sign_changes == 1);
}

TEST_CASE("catalysts keep the protocol alive beyond the correlated-catalyst span") {
    const double alpha = 0.02;
    const double threshold = distribution_threshold_bare(alpha);  // ~54.9
    const double l = 2.3 * threshold;                             // beyond 2(ln3)/alpha
    const double eps = 0.1;

    std::int64_t prev_copies = 0;
    for (double s : {0.2 * threshold, 0.5 * threshold, 0.8 * threshold}) {
        REQUIRE(s < l / 2);
        const DistributionPoint pt = distribution_point({alpha, l, s}, eps, 8, 99);
        REQUIRE(pt.cs_feasible);
        REQUIRE(pt.cs_copies >= prev_copies);  // noisier node state costs more copies
        REQUIRE(pt.emb_schmidt_rank == required_schmidt_rank(2, eps));
        REQUIRE(pt.cs_consumption <= std::sqrt(eps) + 1e-12);
        prev_copies = pt.cs_copies;
    }
}

TEST_CASE("scenario validation") {
    REQUIRE_THROWS_AS(validate(DistributionScenario{-1.0, 10.0, 1.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(validate(DistributionScenario{0.1, 10.0, 11.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(distribution_point({0.1, 10.0, -1.0}, 0.1, 2, 1), std::invalid_argument);
}
