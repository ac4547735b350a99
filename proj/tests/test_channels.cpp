#include <catch2/catch_amalgamated.hpp>

#include "catlab/channels.hpp"
#include "test_helpers.hpp"

using namespace catlab;
using catlab::testing::max_abs_diff;

namespace {

DensityOperator plus_state() {
    ComplexVector plus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    return DensityOperator(plus * plus.adjoint(), Dims{2});
}

}  // namespace

TEST_CASE("dephasing endpoints") {
    auto rng = rng_stream(31);
    const DensityOperator rho = random_full_rank_state(2, rng);
    REQUIRE(max_abs_diff(dephasing(1.0)(rho.mat), rho.mat) < 1e-15);

    // p = 0 conjugates by sigma_z: |+><+| -> |-><-|.
    ComplexVector minus(2);
    minus << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
    REQUIRE(max_abs_diff(dephasing(0.0)(plus_state().mat), minus * minus.adjoint()) < 1e-15);

    REQUIRE(max_abs_diff(dephasing(0.5)(plus_state().mat), ComplexMatrix::Identity(2, 2) / 2.0) < 1e-15);

    REQUIRE_THROWS_AS(dephasing(-0.1), std::invalid_argument);
    REQUIRE_THROWS_AS(dephasing(1.1), std::invalid_argument);
}

TEST_CASE("amplitude damping endpoints") {
    auto rng = rng_stream(32);
    const DensityOperator rho = random_full_rank_state(2, rng);
    REQUIRE(max_abs_diff(amplitude_damping(0.0)(rho.mat), rho.mat) < 1e-15);

    const ComplexMatrix excited = basis_vector(2, 1) * basis_vector(2, 1).adjoint();
    const ComplexMatrix ground = basis_vector(2, 0) * basis_vector(2, 0).adjoint();
    REQUIRE(max_abs_diff(amplitude_damping(1.0)(excited), ground) < 1e-15);
}

TEST_CASE("amplitude damping Choi state at p = 0.65") {
    const ChoiState cs = choi(amplitude_damping(0.65));
    REQUIRE(cs.rho.is_valid_density(1e-9));
    REQUIRE(max_abs_diff(partial_trace(cs.rho, {0}).mat, ComplexMatrix::Identity(2, 2) / 2.0) < 1e-10);
    // The {|00>,|11>} block is rank one, so the spectrum is
    // {(2-p)/2, p/2, 0, 0}.
    const Eigen::VectorXd ev = hermitian_eigenvalues(cs.rho.mat);
    REQUIRE(ev(3) == Catch::Approx((2.0 - 0.65) / 2.0).margin(1e-12));
    REQUIRE(ev(2) == Catch::Approx(0.65 / 2.0).margin(1e-12));
    REQUIRE(ev(1) == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(ev(0) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("depolarizing channel action matches its coefficients") {
    auto rng = rng_stream(33);
    const DensityOperator rho = random_full_rank_state(2, rng);
    REQUIRE(max_abs_diff(depolarizing_length(0.01, 0.0)(rho.mat), rho.mat) < 1e-15);

    const double alpha = 0.013, l = 37.0;
    const double keep = std::exp(-alpha * l);
    const ComplexMatrix expected = keep * rho.mat + (1 - keep) * ComplexMatrix::Identity(2, 2) / 2.0;
    REQUIRE(max_abs_diff(depolarizing_length(alpha, l)(rho.mat), expected) < 1e-12);

    // alpha*l -> infinity collapses everything onto I/2.
    REQUIRE(max_abs_diff(depolarizing_length(1.0, 1e6)(rho.mat), ComplexMatrix::Identity(2, 2) / 2.0) <
            1e-12);

    REQUIRE_THROWS_AS(depolarizing_length(-1.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(depolarizing_length(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("Kraus completeness for constructor outputs") {
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (const KrausChannel& ch : {dephasing(p), amplitude_damping(p)}) {
            ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
            for (const auto& k : ch.kraus) sum += k.adjoint() * k;
            REQUIRE(max_abs_diff(sum, ComplexMatrix::Identity(2, 2)) < 1e-10);
        }
    }
    for (double al : {0.0, 0.3, 2.0}) {
        const KrausChannel ch = depolarizing_length(0.01, al * 100);
        ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
        for (const auto& k : ch.kraus) sum += k.adjoint() * k;
        REQUIRE(max_abs_diff(sum, ComplexMatrix::Identity(2, 2)) < 1e-10);
    }
}

TEST_CASE("apply acts on the chosen subsystem only") {
    const DensityOperator phi = max_entangled(2).to_density();

    // Identity channel leaves the input unchanged.
    const KrausChannel id({ComplexMatrix::Identity(2, 2)}, 2, 2);
    REQUIRE(max_abs_diff(apply(id, phi, 1).mat, phi.mat) < 1e-15);

    // Complete dephasing of one half spreads phi+ over the phi+/phi- sector.
    ComplexVector phi_m(4);
    phi_m << 1 / std::sqrt(2.0), 0, 0, -1 / std::sqrt(2.0);
    const ComplexMatrix expected =
        0.5 * phi.mat + 0.5 * phi_m * phi_m.adjoint();
    REQUIRE(max_abs_diff(apply(dephasing(0.5), phi, 1).mat, expected) < 1e-14);

    REQUIRE_THROWS_AS(apply(dephasing(0.5), maximally_mixed({3, 2}), 0), std::invalid_argument);
}

TEST_CASE("apply preserves trace on random inputs") {
    auto rng = rng_stream(34);
    for (int rep = 0; rep < 100; ++rep) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double p = unif(rng);
        DensityOperator rho = random_full_rank_state(4, rng);
        rho.dims = Dims{2, 2};
        const KrausChannel ch = rep % 2 ? dephasing(p) : amplitude_damping(p);
        const DensityOperator out = apply(ch, rho, rep % 2);
        REQUIRE(out.mat.trace().real() == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("apply is linear") {
    auto rng = rng_stream(35);
    const DensityOperator r1 = random_full_rank_state(2, rng);
    const DensityOperator r2 = random_full_rank_state(2, rng);
    const double a = 0.3;
    const KrausChannel ch = amplitude_damping(0.4);
    const ComplexMatrix mixed = a * r1.mat + (1 - a) * r2.mat;
    const ComplexMatrix lhs = apply(ch, DensityOperator(mixed, Dims{2}), 0).mat;
    const ComplexMatrix rhs = a * apply(ch, r1, 0).mat + (1 - a) * apply(ch, r2, 0).mat;
    REQUIRE(max_abs_diff(lhs, rhs) < 1e-10);
}

TEST_CASE("Choi state of the identity channel is phi+") {
    const KrausChannel id({ComplexMatrix::Identity(2, 2)}, 2, 2);
    REQUIRE(max_abs_diff(choi(id).rho.mat, max_entangled(2).to_density().mat) < 1e-15);
}

TEST_CASE("Choi state of dephasing is Bell diagonal with weights p, 1-p") {
    for (double p : {0.0, 0.3, 0.75}) {
        const ChoiState cs = choi(dephasing(p));
        ComplexVector phi_p(4), phi_m(4);
        phi_p << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
        phi_m << 1 / std::sqrt(2.0), 0, 0, -1 / std::sqrt(2.0);
        const ComplexMatrix expected = p * phi_p * phi_p.adjoint() + (1 - p) * phi_m * phi_m.adjoint();
        REQUIRE(max_abs_diff(cs.rho.mat, expected) < 1e-14);
    }
}

TEST_CASE("Choi state of the depolarizing channel is isotropic") {
    const double alpha = 0.01, l = 100.0 * std::log(3.0);
    const ChoiState cs = choi(depolarizing_length(alpha, l));
    const ComplexMatrix expected =
        (1.0 / 3.0) * max_entangled(2).to_density().mat + (2.0 / 3.0) * maximally_mixed({2, 2}).mat;
    REQUIRE(max_abs_diff(cs.rho.mat, expected) < 1e-12);
}

TEST_CASE("Choi marginals across parameter grids") {
    for (double p : {0.05, 0.4, 0.65, 0.95}) {
        for (const KrausChannel& ch :
             {dephasing(p), amplitude_damping(p), depolarizing_length(0.01, 200 * p)}) {
            const ChoiState cs = choi(ch);
            REQUIRE(max_abs_diff(partial_trace(cs.rho, {0}).mat, ComplexMatrix::Identity(2, 2) / 2.0) <
                    1e-10);
        }
    }
}

TEST_CASE("KrausChannel rejects non-trace-preserving sets") {
    ComplexMatrix half = 0.5 * ComplexMatrix::Identity(2, 2);
    REQUIRE_THROWS_AS(KrausChannel({half}, 2, 2), std::invalid_argument);
}
