// Built-in verification suites run by `catlab selftest`: each module's
// invariants at reduced grid sizes, with per-suite counts.

#pragma once

#include <functional>
#include <iostream>
#include <sstream>

#include "catlab/experiment.hpp"

namespace catlab {

class SelfTestCheck {
  public:
    void require(bool ok, const std::string& what) {
        ++total_;
        if (!ok) {
            ++failed_;
            messages_.push_back(what);
        }
    }
    void require_close(double a, double b, double tol, const std::string& what) {
        std::ostringstream os;
        os << what << " (" << a << " vs " << b << ")";
        require(std::abs(a - b) <= tol, os.str());
    }
    int total() const { return total_; }
    int failed() const { return failed_; }
    const std::vector<std::string>& messages() const { return messages_; }

  private:
    int total_ = 0;
    int failed_ = 0;
    std::vector<std::string> messages_;
};

namespace selftest_detail {

inline void suite_linalg(SelfTestCheck& c) {
    auto rng = rng_stream(101);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int n : {4, 16, 64}) {
        ComplexMatrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
        const ComplexMatrix h = (g + g.adjoint()) / 2.0;
        const EigSystem es = hermitian_eig(h);
        const ComplexMatrix rebuilt =
            es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint();
        c.require((rebuilt - h).norm() < 1e-10 * std::max(1.0, h.norm()),
                  "eig reconstruction at order " + std::to_string(n));

        const ComplexMatrix psd = g * g.adjoint();
        const ComplexMatrix root = matrix_sqrt_psd(psd);
        c.require((root * root - psd).norm() < 1e-9 * std::max(1.0, psd.norm()),
                  "matrix sqrt at order " + std::to_string(n));
    }
    const ComplexMatrix a = ComplexMatrix::Identity(2, 2), b = pauli_x(), d = pauli_z();
    c.require((tensor(tensor(a, b), d) - tensor(a, tensor(b, d))).norm() == 0.0,
              "tensor associativity");
}

inline void suite_states(SelfTestCheck& c) {
    auto rng = rng_stream(102);
    for (int rep = 0; rep < 100; ++rep) {
        const DensityOperator rho = random_full_rank_state(4, rng);
        c.require(std::abs(rho.mat.trace().real() - 1.0) < 1e-12, "random state trace");
        c.require(rho.min_eigenvalue() > 0.0, "random state rank");
    }
    auto rng_a = rng_stream(103), rng_b = rng_stream(103);
    c.require(random_full_rank_state(4, rng_a).mat == random_full_rank_state(4, rng_b).mat,
              "seeded determinism");
    const DensityOperator phi = max_entangled(3).to_density();
    c.require((partial_trace(phi, {0}).mat - ComplexMatrix::Identity(3, 3) / 3.0).norm() < 1e-12,
              "entangled marginal");
}

inline void suite_measures(SelfTestCheck& c) {
    auto rng = rng_stream(104);
    for (int rep = 0; rep < 100; ++rep) {
        const DensityOperator a = random_full_rank_state(3, rng);
        const DensityOperator b = random_full_rank_state(3, rng);
        const DensityOperator t = random_full_rank_state(3, rng);
        c.require(std::abs(uhlmann_fidelity(a, b) - uhlmann_fidelity(b, a)) < 1e-10,
                  "fidelity symmetry");
        c.require(purified_distance(a, b) <= purified_distance(a, t) + purified_distance(t, b) + 1e-9,
                  "triangle inequality");
        const double k = dmax(a, b);
        c.require(dmax_feasibility_check(a, b, k + 1e-6), "dmax feasible above");
        c.require(!dmax_feasibility_check(a, b, k - 1e-3), "dmax infeasible below");
        const double h = von_neumann_entropy(a);
        c.require(h >= 0.0 && h <= std::log2(3.0) + 1e-12, "entropy range");
    }
    for (int rep = 0; rep < 100; ++rep) {
        DensityOperator a = random_full_rank_state(4, rng);
        DensityOperator b = random_full_rank_state(4, rng);
        a.dims = b.dims = Dims{2, 2};
        c.require(dmax(partial_trace(a, {0}), partial_trace(b, {0})) <= dmax(a, b) + 1e-9,
                  "dmax data processing");
        c.require(purified_distance(partial_trace(a, {0}), partial_trace(b, {0})) <=
                      purified_distance(a, b) + 1e-9,
                  "purified-distance data processing");
    }
}

inline void suite_channels(SelfTestCheck& c) {
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (const KrausChannel& ch : {dephasing(p), amplitude_damping(p), depolarizing_keep(p)}) {
            ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
            for (const auto& k : ch.kraus) sum += k.adjoint() * k;
            c.require((sum - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10,
                      "Kraus completeness");
            const ChoiState cs = choi(ch);
            c.require((partial_trace(cs.rho, {0}).mat - ComplexMatrix::Identity(2, 2) / 2.0)
                              .cwiseAbs()
                              .maxCoeff() < 1e-10,
                      "Choi marginal");
        }
    }
    const ChoiState dz = choi(dephasing(0.3));
    c.require_close(hermitian_eigenvalues(dz.rho.mat).maxCoeff(), 0.7, 1e-12,
                    "dephasing Choi spectrum");
}

inline void suite_convex_split(SelfTestCheck& c) {
    auto rng = rng_stream(105);
    for (int rep = 0; rep < 20; ++rep) {
        DensityOperator rho = random_full_rank_state(4, rng);
        DensityOperator zeta = random_full_rank_state(4, rng);
        rho.dims = zeta.dims = Dims{2, 2};
        const double w = 0.3 * (rep % 3);
        const DensityOperator tau(w * rho.mat + (1 - w) * zeta.mat, Dims{2, 2});
        const double k = dmax(rho, tau);
        ComplexMatrix tau_power = tau.mat;
        for (int n = 1; n <= 3; ++n) {
            if (n > 1) tau_power = tensor(tau_power, tau.mat);
            const DensityOperator mu = convex_split_state(rho, tau, n);
            c.require(purified_distance(mu.mat, tau_power) <= convex_split_bound(k, n) + 1e-9,
                      "splitting bound");
        }
    }
    const ChoiState cs = choi(dephasing(0.4));
    const TauFamily fam(cs.rho, maximally_mixed({2, 2}));
    const NminResult r = fam.n_min(0.1);
    c.require(r.feasible, "n_min feasibility");
    if (r.feasible) {
        const double lhs = std::sqrt(std::exp2(fam.dmax_at(r.p_star)) / double(r.n_min)) +
                           std::sqrt(1.0 - fam.fidelity_to_phi(r.p_star));
        c.require(lhs <= std::sqrt(0.1) + 1e-9, "n_min constraint holds when substituted back");
    }
    const DescentReport rep = n_min_random(cs, 5, 0.1, 77);
    c.require(rep.feasible && rep.theta >= 0.0, "descent ratio sign");
}

inline void suite_embezzling(SelfTestCheck& c) {
    for (int m = 2; m <= 4; ++m)
        for (int M = m; M <= 32; ++M)
            c.require(unitary_transport_check(m, M),
                      "transport identity m=" + std::to_string(m) + " M=" + std::to_string(M));

    // Deliberately corrupted permutation must be caught.
    const double dev = transport_max_deviation(2, 3, [](int i, int j) { return std::pair{i, j}; });
    c.require(dev > 1e-10, "mutated permutation detected");

    for (auto [m, M] : std::vector<std::pair<int, int>>{{2, 4}, {3, 7}}) {
        const PureState mu = protocol_state_mu(m, M);
        const EmbezzlingState tau = embezzling_state(M);
        ComplexVector target = ComplexVector::Zero(mu.amps.size());
        for (int a = 0; a < m; ++a)
            for (int cc = 0; cc < M; ++cc)
                target(((static_cast<Eigen::Index>(a) * M + cc) * m + a) * M + cc) =
                    tau.schmidt(cc) / std::sqrt(double(m));
        const double f = std::norm((target.adjoint() * mu.amps)(0));
        c.require_close(f, protocol_fidelity(m, M).fidelity, 1e-10, "fidelity route agreement");

        const DensityOperator xi = partial_trace(mu, {1, 3});
        const ConsumptionRecord rec = consumption_exact(m, M);
        c.require_close(purified_distance(xi, tau.pure()), rec.direct, 1e-12,
                        "consumption direct vs dense partial trace");
        c.require(!rec.mismatch, "consumption closed form matches oracle");
        c.require(rec.direct <= rec.bound + 1e-9, "consumption bound");
    }
}

inline void suite_superdense(SelfTestCheck& c) {
    c.require_close(sdc_capacity(max_entangled(2).to_density()).value, 2.0, 1e-10,
                    "capacity of phi+");
    c.require_close(sdc_capacity(maximally_mixed({2, 2})).value, 0.0, 1e-10,
                    "capacity of the maximally mixed state");
    double prev = 0.0;
    for (int M = 2; M <= 256; M *= 2) {
        const double v = sdc_capacity(catalytic_sdc_state(2, M)).value;
        c.require(v >= prev - 1e-9, "capacity monotone in rank");
        prev = v;
    }
    const PureState mu = protocol_state_mu(2, 3);
    c.require((partial_trace(mu, {0, 2}).mat - catalytic_sdc_state(2, 3).mat).cwiseAbs().maxCoeff() <
                  1e-12,
              "post-catalysis state matches traced protocol state");
}

inline void suite_distribution(SelfTestCheck& c) {
    const double alpha = 0.01;
    c.require(std::abs(ppt_threshold_bisection(alpha) - std::log(3.0) / alpha) /
                      (std::log(3.0) / alpha) <
                  1e-6,
              "bisection threshold");
    double prev = -1.0;
    for (int i = 0; i <= 10; ++i) {
        const double w = ppt_min_eigenvalue(choi(depolarizing_length(alpha, 30.0 * i)).rho);
        c.require(w > prev, "witness monotone");
        prev = w;
    }
}

inline void suite_io(SelfTestCheck& c) {
    auto rng = rng_stream(106);
    DensityOperator rho = random_full_rank_state(4, rng);
    rho.dims = Dims{2, 2};
    const json j = state_to_json(rho);
    const DensityOperator back = state_from_json(json::parse(j.dump()));
    c.require(back.mat == rho.mat && back.dims == rho.dims, "state JSON round trip is bit exact");

    std::istringstream cfg_text("experiment = fig9\nd_grid = 2\nM_grid = 2, 4\nseed = 9\n");
    ExperimentConfig cfg = parse_config_text(cfg_text);
    finalize_config(cfg);
    c.require(cfg.d_grid == std::vector<int>{2} && cfg.seed == 9, "config parse");
    const auto rows = run_experiment(cfg);
    c.require(!rows.empty(), "experiment produces rows");
}

}  // namespace selftest_detail

// Runs every suite, prints per-suite counts, returns false on any failure.
inline bool run_selftest(std::ostream& os) {
    using Suite = std::pair<const char*, std::function<void(SelfTestCheck&)>>;
    const std::vector<Suite> suites = {
        {"linalg", selftest_detail::suite_linalg},
        {"states", selftest_detail::suite_states},
        {"measures", selftest_detail::suite_measures},
        {"channels", selftest_detail::suite_channels},
        {"convex-split", selftest_detail::suite_convex_split},
        {"embezzling", selftest_detail::suite_embezzling},
        {"superdense", selftest_detail::suite_superdense},
        {"distribution", selftest_detail::suite_distribution},
        {"io", selftest_detail::suite_io},
    };
    bool all_ok = true;
    for (const auto& [name, fn] : suites) {
        SelfTestCheck check;
        fn(check);
        os << (check.failed() == 0 ? "PASS" : "FAIL") << "  " << name << ": "
           << (check.total() - check.failed()) << "/" << check.total() << " checks\n";
        for (const auto& msg : check.messages()) os << "      failed: " << msg << "\n";
        all_ok = all_ok && check.failed() == 0;
    }
    return all_ok;
}

}  // namespace catlab
