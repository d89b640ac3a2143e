#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "scelab/semiclassical.hpp"
#include "scelab/verify.hpp"

using namespace sce;

namespace {

Grid1D mass_grid(int n) { return make_grid_unit_weights(0.0, n - 1.0, n); }

}  // namespace

TEST_CASE("bosonic energy pieces") {
    Grid1D g = mass_grid(6);
    MarginalDensity mu = uniform_marginal(g, 2);
    CostMatrix cap = coulomb_cost(g);
    Wavefunction psi = wf_from_plan_sqrt(product_plan(mu, 2));

    CHECK(bosonic_energy(psi, 0.0, cap) ==
          doctest::Approx(coulomb_energy(product_plan(mu, 2), cap)).epsilon(1e-13));

    // product structure: alpha * N * one-body kinetic + double integral
    std::vector<double> sq(g.n);
    for (int i = 0; i < g.n; ++i) sq[i] = std::sqrt(mu.values[i]);
    std::vector<double> ds = gradient_fd(g, sq);
    double t1 = 0.0;
    for (int i = 0; i < g.n; ++i) t1 += g.weights[i] * ds[i] * ds[i];
    double vee = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            vee += g.weights[i] * g.weights[j] * mu.values[i] * mu.values[j] *
                   cap.values[static_cast<std::size_t>(i) * g.n + j];
    CHECK(bosonic_energy(psi, 0.7, cap) == doctest::Approx(0.7 * 2.0 * t1 + vee).epsilon(1e-12));

    // doubling alpha adds exactly T
    const double t = kinetic_energy(psi);
    CHECK(bosonic_energy(psi, 2.0, cap) - bosonic_energy(psi, 1.0, cap) ==
          doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("minimize_bosonic: feasible from the start, near-optimal at small alpha") {
    Grid1D g = mass_grid(8);
    MarginalDensity mu = uniform_marginal(g, 2);
    CostMatrix cap = coulomb_cost(g);

    // the product initialization already satisfies the marginal constraint
    TransportPlan init = product_plan(mu, 2);
    for (int axis = 0; axis < 2; ++axis) {
        std::vector<double> m = one_body_marginal(init, axis);
        for (int i = 0; i < g.n; ++i) CHECK(m[i] == doctest::Approx(mu.values[i]).epsilon(1e-12));
    }

    OptimizerConfig cfg;
    cfg.max_iterations = 400;
    MinimizeResult r = minimize_bosonic(mu, 2, 1e-4, cap, cfg);
    // returned state is feasible and normalized
    DTensor dens = wf_position_density(r.psi);
    TransportPlan rp = make_plan(g, 2, dens, true, false);
    for (int axis = 0; axis < 2; ++axis) {
        std::vector<double> m = one_body_marginal(rp, axis);
        for (int i = 0; i < g.n; ++i) CHECK(m[i] == doctest::Approx(mu.values[i]).epsilon(1e-9));
    }
    MmotSolution s = solve_mmot(make_mmot_problem(mu, 2, coulomb_cost(g, -1.0, true)));
    CHECK(r.value >= s.value - 1e-9);
    CHECK(r.value <= s.value * 1.05);  // within 5 percent at alpha = 1e-4
}

TEST_CASE("minimize_bosonic value is monotone in alpha on a shared family") {
    Grid1D g = mass_grid(6);
    MarginalDensity mu = uniform_marginal(g, 2);
    CostMatrix cap = coulomb_cost(g);
    OptimizerConfig cfg;
    cfg.max_iterations = 200;
    MinimizeResult lo = minimize_bosonic(mu, 2, 0.05, cap, cfg);
    MinimizeResult hi = minimize_bosonic(mu, 2, 0.5, cap, cfg);
    // evaluate both candidates under both couplings
    const double at_lo = std::min(bosonic_energy(lo.psi, 0.05, cap), bosonic_energy(hi.psi, 0.05, cap));
    const double at_hi = std::min(bosonic_energy(lo.psi, 0.5, cap), bosonic_energy(hi.psi, 0.5, cap));
    CHECK(at_lo <= at_hi + 1e-12);
    CHECK(lo.value >= 0.0);
    CHECK(hi.value >= lo.value - 1e-9);
}

TEST_CASE("recovery upper bound") {
    Grid1D g = mass_grid(8);
    MarginalDensity mu = uniform_marginal(g, 2);
    CostMatrix cap = coulomb_cost(g);
    MmotSolution s = solve_mmot(make_mmot_problem(mu, 2, coulomb_cost(g, -1.0, true)));
    TransportPlan opt = canonical_symmetrized(s);

    const double v1 = recovery_upper_bound(opt, mu, 1.0, 0.5, 0.05, cap);
    const double v2 = recovery_upper_bound(opt, mu, 0.01, 0.5, 0.05, cap);
    CHECK(v1 >= s.value - 1e-9);
    CHECK(v2 >= s.value - 1e-9);
    CHECK(v2 <= v1);  // same trial state, smaller coupling
    // limit alpha -> 0 is the interaction energy of the recovered plan
    TransportPlan rec = recovery_plan(opt, mu, 0.5, 0.05);
    CHECK(recovery_upper_bound(opt, mu, 1e-12, 0.5, 0.05, cap) ==
          doctest::Approx(coulomb_energy(rec, cap)).epsilon(1e-9));
}

TEST_CASE("chain bound for the recovered interaction energy") {
    // Vee(P gamma_{eps,beta}) <= (1-2beta/N) Vee(gamma) + beta(N-1) Vee(mu x mu)
    //                            + c* C(N,2) ||mu_eps - mu||_{L1 cap L3}
    Grid1D g = mass_grid(8);
    MarginalDensity mu = uniform_marginal(g, 2);
    CostMatrix cap = coulomb_cost(g);
    MmotSolution s = solve_mmot(make_mmot_problem(mu, 2, coulomb_cost(g, -1.0, true)));
    TransportPlan gamma = canonical_symmetrized(s);
    for (double eps : {1e-9, 0.5}) {
        for (double beta : {0.02, 0.2}) {
            TransportPlan rec = recovery_plan(gamma, mu, eps, beta);
            const double lhs = coulomb_energy(rec, cap);
            MollifierKernel k = gaussian_mollifier(eps, g);
            std::vector<double> mu_eps = smooth_density(g, mu.values, k);
            std::vector<double> diff(g.n);
            for (int i = 0; i < g.n; ++i) diff[i] = mu_eps[i] - mu.values[i];
            const double rhs = (1.0 - beta) * coulomb_energy(gamma, cap) +
                               beta * coulomb_energy(product_plan(mu, 2), cap) +
                               coulomb_stability_constant() * 1.0 * l1_l3_norm(g, diff);
            CHECK(lhs <= rhs * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("sweep record structure and moment proxy") {
    Grid1D g = mass_grid(8);
    SweepConfig cfg;
    cfg.mu = uniform_marginal(g, 2);
    cfg.n_bodies = 2;
    cfg.alphas = {1.0, 1e-2, 1e-4};
    cfg.epsilon_schedule = {1e-9, 0.5};
    cfg.beta_schedule = {1e-9, 0.05};
    cfg.optimizer.max_iterations = 150;
    SweepResult r = semiclassical_sweep(cfg);

    REQUIRE(r.records.size() == 3);
    for (const auto& rec : r.records) {
        CHECK(rec.gap >= -1e-9);
        CHECK(rec.moments[0] == doctest::Approx(1.0).epsilon(1e-9));  // mass moment
    }
    CHECK(r.records.front().gap > r.records.back().gap);
    // upper bounds nondecreasing in alpha
    CHECK(r.records[0].f_alpha_upper >= r.records[1].f_alpha_upper - 1e-12);
    CHECK(r.records[1].f_alpha_upper >= r.records[2].f_alpha_upper - 1e-12);
    // moment proxy at the smallest coupling
    CHECK((r.final_moment_deviation <= 0.05 || r.minimizer_mismatch));

    SweepConfig bad = cfg;
    bad.alphas = {1e-4, 1.0};
    CHECK_THROWS_AS(semiclassical_sweep(bad), std::invalid_argument);
}

TEST_CASE("non-convergence inside a tiny budget is flagged") {
    Grid1D g = make_grid_unit_weights(0.0, 5.0, 6);
    MarginalDensity mu = uniform_marginal(g, 2);
    OptimizerConfig cfg;
    cfg.max_iterations = 2;
    MinimizeResult r = minimize_bosonic(mu, 2, 1e-3, coulomb_cost(g), cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 2);
    CHECK(r.value >= 0.0);
}

TEST_CASE("three-body sweep closes its gap as well") {
    Grid1D g = make_grid_unit_weights(0.0, 3.0, 4);
    SweepConfig cfg;
    cfg.mu = uniform_marginal(g, 3);
    cfg.n_bodies = 3;
    cfg.alphas = {1.0, 1e-2, 1e-4};
    cfg.epsilon_schedule = {1e-9, 0.5};
    cfg.beta_schedule = {1e-9, 0.05};
    cfg.optimizer.max_iterations = 300;
    SweepResult r = semiclassical_sweep(cfg);
    for (const auto& rec : r.records) CHECK(rec.gap >= -1e-9);
    CHECK(r.records.back().gap / r.v_sce < 0.05);
    CHECK(r.records.back().gap < r.records.front().gap);
    CHECK((r.final_moment_deviation <= 0.05 || r.minimizer_mismatch));
}
