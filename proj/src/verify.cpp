#include "scelab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "scelab/fermionize.hpp"
#include "scelab/harriman.hpp"
#include "scelab/lawrentiev.hpp"
#include "scelab/mmot.hpp"
#include "scelab/reinstate.hpp"
#include "scelab/semiclassical.hpp"

namespace sce {

MarginalDensity random_density(const Grid1D& g, Rng& rng, int particle_count) {
    std::vector<double> v(g.n);
    for (double& x : v) x = rng.uniform(0.1, 1.0);
    return make_marginal(g, std::move(v), particle_count, true);
}

TransportPlan random_symmetric_plan(const Grid1D& g, int n_bodies, Rng& rng) {
    const int mixtures = 3;
    DTensor acc(g.n, n_bodies);
    double total_weight = 0.0;
    for (int m = 0; m < mixtures; ++m) {
        const double cw = rng.uniform(0.2, 1.0);
        total_weight += cw;
        std::vector<std::vector<double>> factors(n_bodies);
        for (auto& f : factors) f = random_density(g, rng).values;
        // symmetrized product: average the factor assignment over permutations
        std::vector<int> perm(n_bodies);
        for (int i = 0; i < n_bodies; ++i) perm[i] = i;
        int nperm = 0;
        DTensor sym(g.n, n_bodies);
        do {
            MultiIndex mi(g.n, n_bodies);
            std::size_t f = 0;
            do {
                double v = 1.0;
                for (int k = 0; k < n_bodies; ++k) v *= factors[perm[k]][mi.idx[k]];
                sym.v[f] += v;
                ++f;
            } while (mi.advance());
            ++nperm;
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (std::size_t i = 0; i < acc.size(); ++i) acc.v[i] += cw * sym.v[i] / nperm;
    }
    for (double& x : acc.v) x /= total_weight;
    return make_plan(g, n_bodies, std::move(acc), true, true);
}

namespace {

struct Suite {
    std::vector<CheckResult> out;
    void add(const std::string& name, bool pass, const std::string& detail = "",
             bool required = true) {
        out.push_back({name, pass, required, detail});
    }
};

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_marginal_error(const TransportPlan& p, const MarginalDensity& mu) {
    double worst = 0.0;
    for (int axis = 0; axis < p.n_bodies; ++axis) {
        std::vector<double> m = one_body_marginal(p, axis);
        worst = std::max(worst, max_abs_diff(m, mu.values));
    }
    return worst;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

}  // namespace

std::vector<CheckResult> run_verification(bool quick, std::uint64_t seed) {
    Suite s;
    Rng rng(seed);

    // --- grids, quadrature, mollifier ---
    {
        Grid1D g = make_grid(-1.0, 2.5, quick ? 33 : 101);
        std::vector<double> ones(g.n, 1.0);
        const double q = quadrature(g, ones);
        s.add("grid: quadrature of 1 equals b-a", std::abs(q - 3.5) <= 1e-12, fmt(q - 3.5));

        std::vector<double> u(g.n), v(g.n);
        for (int i = 0; i < g.n; ++i) {
            u[i] = rng.uniform(-1.0, 1.0);
            v[i] = rng.uniform(-1.0, 1.0);
        }
        std::vector<double> lin(g.n);
        for (int i = 0; i < g.n; ++i) lin[i] = 0.7 * u[i] - 1.3 * v[i];
        std::vector<double> glin = gradient_fd(g, lin);
        std::vector<double> gu = gradient_fd(g, u), gv = gradient_fd(g, v);
        double lerr = 0.0;
        for (int i = 0; i < g.n; ++i)
            lerr = std::max(lerr, std::abs(glin[i] - (0.7 * gu[i] - 1.3 * gv[i])));
        s.add("grid: finite-difference gradient is linear", lerr <= 1e-12, fmt(lerr));

        Grid1D g01 = make_grid(0.0, 1.0, 101);
        MollifierKernel k = gaussian_mollifier(2.0 * g01.h, g01);
        double ksum = 0.0, kmin = 1.0;
        for (double wv : k.weights) {
            ksum += wv;
            kmin = std::min(kmin, wv);
        }
        bool sym = true;
        for (int o = 0; o <= k.radius; ++o)
            if (k.weights[k.radius + o] != k.weights[k.radius - o]) sym = false;
        s.add("mollifier: weights nonnegative, symmetric, sum 1",
              std::abs(ksum - 1.0) <= 1e-14 && kmin >= 0.0 && sym, fmt(ksum - 1.0));
        s.add("mollifier: eps=2h support has at most 25 offsets",
              static_cast<int>(k.weights.size()) <= 25,
              std::to_string(k.weights.size()) + " offsets");
    }

    // --- plan core ---
    {
        Grid1D g = make_grid_unit_weights(0.0, 3.0, 4);
        for (int nb : {2, 3}) {
            TransportPlan p = random_symmetric_plan(g, nb, rng);
            DTensor m1 = marginal_k(p, 1);
            double mass = 0.0;
            for (int i = 0; i < g.n; ++i) mass += g.weights[i] * m1.v[i];
            s.add("marginal_k preserves mass (N=" + std::to_string(nb) + ")",
                  std::abs(mass - 1.0) <= 1e-12, fmt(mass - 1.0));

            CostMatrix c = coulomb_cost(g);
            const double vee = coulomb_energy(p, c);
            DTensor m2 = (nb == 2) ? p.values : marginal_k(p, 2);
            const double v2 = kern::pair_cost_sum(m2, c.values, g.weights);
            const double pairs = 0.5 * nb * (nb - 1);
            s.add("pair reduction Vee = C(N,2) Vee(M2) (N=" + std::to_string(nb) + ")",
                  std::abs(vee - pairs * v2) <= 1e-12 * std::max(1.0, vee),
                  fmt(vee - pairs * v2));
        }

        // permutation invariance of the energies
        TransportPlan p = random_symmetric_plan(g, 2, rng);
        DTensor asym = p.values;
        asym.v[1] += 0.05;  // break symmetry, keep mass via renormalize
        TransportPlan q = make_plan(g, 2, asym, false, true);
        CostMatrix c = coulomb_cost(g);
        TransportPlan qp = make_plan(g, 2, permute_axes(q.values, {1, 0}), false, false);
        s.add("coulomb_energy invariant under coordinate permutation",
              std::abs(coulomb_energy(q, c) - coulomb_energy(qp, c)) <= 1e-12,
              fmt(coulomb_energy(q, c) - coulomb_energy(qp, c)));
    }
    {
        // Hoffmann-Ostenhof: equality for positive products, inequality in general
        Grid1D g = make_grid(0.0, 1.0, quick ? 101 : 201);
        std::vector<double> a(g.n), b(g.n);
        for (int i = 0; i < g.n; ++i) {
            a[i] = 1.0 + 0.5 * std::sin(2.0 * kPi * g.nodes[i]);
            b[i] = 1.0 + 0.4 * std::cos(2.0 * kPi * g.nodes[i]);
        }
        Wavefunction w = make_wavefunction(g, 2, false);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                w.blocks[0].v[static_cast<std::size_t>(i) * g.n + j] = a[i] * b[j];
        wf_normalize(w);
        auto [lhs, rhs] = hoffmann_ostenhof_check(w);
        s.add("hoffmann-ostenhof equality for positive products",
              std::abs(lhs - rhs) <= 1e-6 * std::max(1.0, rhs), fmt(lhs - rhs));

        Wavefunction wr = make_wavefunction(g, 2, false);
        Rng r2(seed ^ 0x55);
        for (auto& z : wr.blocks[0].v) z = r2.uniform(0.05, 1.0);
        wf_normalize(wr);
        auto [l2, r2v] = hoffmann_ostenhof_check(wr);
        s.add("hoffmann-ostenhof inequality for random positive amplitude",
              l2 <= r2v * (1.0 + 1e-3), fmt(l2 / r2v));
    }
    {
        Grid1D g2 = make_grid_unit_weights(0.0, 1.0, 2);
        g2.weights = {0.5, 0.5};
        const double v = l1_l3_norm(g2, {0.2, -0.2});
        s.add("L1-cap-L3 norm on the two-point example equals 0.2",
              std::abs(v - 0.2) <= 1e-15, fmt(v - 0.2));
    }

    // --- reinstatement ---
    {
        Grid1D g = make_grid_unit_weights(0.0, 1.0, 2);
        MarginalDensity ma = make_marginal(g, {0.6, 0.4}, 2);
        MarginalDensity mb = make_marginal(g, {0.4, 0.6}, 2);
        CouplingKernel k = build_coupling(ma, mb);
        std::vector<double> m = coupling_matrix(k);
        const bool entries = std::abs(m[0] - 0.4) <= 1e-15 && std::abs(m[1]) <= 1e-15 &&
                             std::abs(m[2] - 0.2) <= 1e-15 && std::abs(m[3] - 0.4) <= 1e-15;
        const double row0 = m[0] + m[1], row1 = m[2] + m[3];
        const double col0 = m[0] + m[2], col1 = m[1] + m[3];
        s.add("coupling kernel two-node example matrix and marginals",
              entries && std::abs(row0 - 0.4) <= 1e-15 && std::abs(row1 - 0.6) <= 1e-15 &&
                  std::abs(col0 - 0.6) <= 1e-15 && std::abs(col1 - 0.4) <= 1e-15);
    }
    {
        const int rounds = quick ? 8 : 40;
        double worst = 0.0;
        for (int r = 0; r < rounds; ++r) {
            const int nb = 2 + (r % 2);
            const int n = (r % 3 == 0) ? 2 : ((r % 3 == 1) ? 4 : 8);
            Grid1D g = (r % 2 == 0) ? make_grid(0.0, 1.0, n) : make_grid_unit_weights(0.0, 1.0, n);
            TransportPlan p = random_symmetric_plan(g, nb, rng);
            MarginalDensity mb = random_density(g, rng, nb);
            TransportPlan proj = project(p, mb);
            worst = std::max(worst, max_marginal_error(proj, mb));
        }
        s.add("projection restores every one-body marginal (randomized)", worst <= 1e-10,
              "max err " + fmt(worst));
    }
    {
        Grid1D g = make_grid(0.0, 1.0, 6);
        TransportPlan p = random_symmetric_plan(g, 2, rng);
        MarginalDensity mu_same =
            make_marginal(g, one_body_marginal(p, 0), 2, true);
        TransportPlan same = project(p, mu_same);
        double d = 0.0;
        for (std::size_t i = 0; i < p.values.size(); ++i)
            d = std::max(d, std::abs(p.values.v[i] - same.values.v[i]));
        s.add("projection with matching marginal is the identity", d <= 1e-13, fmt(d));

        MarginalDensity mb = random_density(g, rng, 2);
        TransportPlan prod = product_plan(mu_same, 2);
        TransportPlan pp = project(prod, mb);
        TransportPlan target = product_plan(mb, 2);
        double dp = 0.0;
        for (std::size_t i = 0; i < pp.values.size(); ++i)
            dp = std::max(dp, std::abs(pp.values.v[i] - target.values.v[i]));
        s.add("projection maps product plans to product plans", dp <= 1e-12, fmt(dp));
    }
    {
        double worst = 0.0;
        for (int nb : {2, 3}) {
            Grid1D g = make_grid_unit_weights(0.0, 1.0, nb == 2 ? 8 : 4);
            TransportPlan p = random_symmetric_plan(g, nb, rng);
            MarginalDensity mb = random_density(g, rng, nb);
            TransportPlan a = project(p, mb);
            TransportPlan b = project_via_expansion(p, mb);
            for (std::size_t i = 0; i < a.values.size(); ++i)
                worst = std::max(worst, std::abs(a.values.v[i] - b.values.v[i]));
        }
        s.add("multi-index expansion agrees with direct projection", worst <= 1e-12, fmt(worst));
    }
    {
        bool ok = true;
        std::string detail;
        for (int nb : {2, 3}) {
            Grid1D g = make_grid_unit_weights(0.0, 1.0, nb == 2 ? 4 : 2);
            for (int r = 0; r < (quick ? 4 : 20); ++r) {
                TransportPlan p = random_symmetric_plan(g, nb, rng);
                MarginalDensity mb = random_density(g, rng, nb);
                auto [lhs, rhs] = l1_stability_check(p, mb);
                if (lhs > rhs + 1e-12) {
                    ok = false;
                    detail = "violated at N=" + std::to_string(nb);
                }
            }
        }
        s.add("L1 stability bound (constant 2.5 for N=2, 5 for N=3)", ok, detail);
    }
    {
        Grid1D g = make_grid(0.0, 1.0, 9);
        TransportPlan p = random_symmetric_plan(g, 2, rng);
        MarginalDensity mb = random_density(g, rng, 2);
        TransportPlan pp = project(p, mb);
        // compare M1 of the projected plan against projecting a 1-body object:
        // both equal mu_B, and M2-level commutation for N=3
        Grid1D g3 = make_grid_unit_weights(0.0, 1.0, 3);
        TransportPlan p3 = random_symmetric_plan(g3, 3, rng);
        MarginalDensity mb3 = random_density(g3, rng, 3);
        TransportPlan pp3 = project(p3, mb3);
        DTensor lhs2 = marginal_k(pp3, 2);
        TransportPlan m2plan = make_plan(g3, 2, marginal_k(p3, 2), true, false);
        TransportPlan rhs2 = project(m2plan, mb3);
        double d2 = 0.0;
        for (std::size_t i = 0; i < lhs2.size(); ++i)
            d2 = std::max(d2, std::abs(lhs2.v[i] - rhs2.values.v[i]));
        s.add("projection commutes with k-body marginals", d2 <= 1e-12, fmt(d2));
        double neg = 0.0;
        for (double x : pp.values.v) neg = std::min(neg, x);
        s.add("projection preserves nonnegativity", neg >= 0.0, fmt(neg));
    }
    {
        Grid1D g = make_grid(0.0, 1.0, quick ? 9 : 17);
        TransportPlan p = random_symmetric_plan(g, 2, rng);
        MollifierKernel k = gaussian_mollifier(3.0 * g.h, g);
        TransportPlan sm = smooth(p, k);
        s.add("smoothing preserves total mass", std::abs(plan_mass(sm) - 1.0) <= 1e-12,
              fmt(plan_mass(sm) - 1.0));
        std::vector<double> m1s = one_body_marginal(sm, 0);
        std::vector<double> sm1 = smooth_density(g, one_body_marginal(p, 0), k);
        s.add("marginal of smoothed plan equals smoothed marginal",
              max_abs_diff(m1s, sm1) <= 1e-12, fmt(max_abs_diff(m1s, sm1)));

        // near-diagonal plan: smoothing lowers the capped interaction energy
        DTensor diag(g.n, 2);
        for (int i = 0; i < g.n; ++i)
            diag.v[static_cast<std::size_t>(i) * g.n + i] = 1.0;
        TransportPlan dp = make_plan(g, 2, std::move(diag), true, true);
        CostMatrix c = coulomb_cost(g);
        const double before = coulomb_energy(dp, c);
        const double after = coulomb_energy(smooth(dp, k), c);
        s.add("smoothing does not raise the energy of a near-diagonal plan",
              after <= before * (1.0 + 1e-6), fmt(after / before));
        TransportPlan sp = random_symmetric_plan(g, 2, rng);
        const double b2 = coulomb_energy(sp, c);
        const double a2 = coulomb_energy(smooth(sp, k), c);
        s.add("[report, d=1 caveat] smoothing energy inequality on a generic plan",
              a2 <= b2 * (1.0 + 1e-6), "ratio " + fmt(a2 / b2), false);
    }
    {
        Grid1D g = make_grid_unit_weights(0.0, 1.0, 2);
        TransportPlan p3 = random_symmetric_plan(g, 3, rng);
        const double beta = 0.2;
        TransportPlan sp = strong_positivize(p3, beta);
        s.add("strong positivization keeps the one-body marginal",
              max_abs_diff(one_body_marginal(sp, 0), one_body_marginal(p3, 0)) <= 1e-12);
        DTensor m2 = marginal_k(sp, 2);
        DTensor m2g = marginal_k(p3, 2);
        std::vector<double> mu = one_body_marginal(p3, 0);
        double d = 0.0;
        MultiIndex mi(g.n, 2);
        std::size_t f = 0;
        do {
            const double expect = (1.0 - 2.0 * beta / 3.0) * m2g.v[f] +
                                  (2.0 * beta / 3.0) * mu[mi.idx[0]] * mu[mi.idx[1]];
            d = std::max(d, std::abs(m2.v[f] - expect));
            ++f;
        } while (mi.advance());
        s.add("two-body marginal identity after positivization (N=3)", d <= 1e-12, fmt(d));

        Grid1D g4 = make_grid_unit_weights(0.0, 1.0, 4);
        TransportPlan p2 = random_symmetric_plan(g4, 2, rng);
        TransportPlan sp2 = strong_positivize(p2, 0.1);
        MarginalDensity mu2 = make_marginal(g4, one_body_marginal(p2, 0), 2, true);
        TransportPlan mf = product_plan(mu2, 2);
        double dd = 0.0;
        for (std::size_t i = 0; i < sp2.values.size(); ++i)
            dd = std::max(dd, std::abs(sp2.values.v[i] -
                                       (0.9 * p2.values.v[i] + 0.1 * mf.values.v[i])));
        s.add("N=2 positivization is the mean-field mixture", dd <= 1e-12, fmt(dd));
        StrongPositivity st = is_strongly_positive(sp2);
        s.add("positivized plan passes the strong-positivity scan",
              st.holds && st.best_beta >= 0.09, "beta " + fmt(st.best_beta));
        StrongPositivity prod_sp = is_strongly_positive(mf);
        s.add("product plan has strong-positivity constant 1",
              prod_sp.holds && std::abs(prod_sp.best_beta - 1.0) <= 1e-9,
              fmt(prod_sp.best_beta));
    }
    {
        const double cstar = coulomb_stability_constant();
        s.add("interaction stability constant equals 12.1868",
              std::abs(cstar - 12.1868) <= 1e-3, fmt(cstar));
        Grid1D g = make_grid_unit_weights(0.0, 1.0, 4);
        bool ok = true;
        for (int r = 0; r < (quick ? 3 : 10); ++r) {
            TransportPlan p = random_symmetric_plan(g, 2, rng);
            MarginalDensity mb = random_density(g, rng, 2);
            auto [lhs, rhs] = coulomb_stability_check(p, mb, coulomb_cost(g));
            if (lhs > rhs) ok = false;
        }
        s.add("[report, d=1 caveat] interaction stability bound on random instances", ok, "",
              false);
    }
    {
        Grid1D g = make_grid(0.0, 1.0, quick ? 9 : 17);
        TransportPlan p = random_symmetric_plan(g, 2, rng);
        MarginalDensity target = random_density(g, rng, 2);
        TransportPlan rec = recovery_plan(p, target, 2.0 * g.h, 0.15);
        s.add("recovery plan hits the target marginal",
              max_marginal_error(rec, target) <= 1e-10, fmt(max_marginal_error(rec, target)));
        StrongPositivity st = is_strongly_positive(rec);
        s.add("recovery plan is strongly positive", st.holds, "beta " + fmt(st.best_beta));
        const double t = kinetic_energy(wf_from_plan_sqrt(rec));
        s.add("recovery plan has finite discrete kinetic energy", std::isfinite(t), fmt(t));
    }
    {
        // regularity preservation proxy under refinement
        std::vector<double> kinetics;
        for (int n : {17, 33, 65}) {
            Grid1D g = make_grid(0.0, 1.0, n);
            std::vector<double> va(g.n), vb(g.n);
            for (int i = 0; i < g.n; ++i) {
                va[i] = 2.0 + std::cos(2.0 * kPi * g.nodes[i]);
                vb[i] = 2.0 + std::sin(2.0 * kPi * g.nodes[i]);
            }
            MarginalDensity mua = make_marginal(g, va, 2, true);
            MarginalDensity mub = make_marginal(g, vb, 2, true);
            TransportPlan base = product_plan(mua, 2);
            TransportPlan pos = strong_positivize(smooth(base, gaussian_mollifier(0.05, g)), 0.2);
            TransportPlan proj = project(pos, mub);
            kinetics.push_back(kinetic_energy(wf_from_plan_sqrt(proj)));
        }
        const bool ok = kinetics[1] <= 4.0 * kinetics[0] && kinetics[2] <= 4.0 * kinetics[1];
        s.add("projected plans keep bounded kinetic energy under refinement", ok,
              fmt(kinetics[0]) + " / " + fmt(kinetics[1]) + " / " + fmt(kinetics[2]));
    }

    // --- transport solver ---
    {
        Grid1D g = make_grid_unit_weights(0.0, 1.0, 2);
        MarginalDensity mu = make_marginal(g, {0.5, 0.5}, 2);
        MmotSolution sol = solve_mmot(make_mmot_problem(mu, 2, coulomb_cost(g, -1.0, true)));
        s.add("two-node transport value is 1", std::abs(sol.value - 1.0) <= 1e-9,
              fmt(sol.value - 1.0));

        Grid1D g3 = make_grid_unit_weights(0.0, 2.0, 3);
        MarginalDensity mu3 = uniform_marginal(g3, 2);
        MmotProblem pr3 = make_mmot_problem(mu3, 2, coulomb_cost(g3, -1.0, true));
        MmotSolution s3 = solve_mmot(pr3);
        MmotSolution b3 = brute_force_mmot(pr3);
        s.add("three-node uniform value is 5/6",
              std::abs(s3.value - 5.0 / 6.0) <= 1e-9 && std::abs(b3.value - 5.0 / 6.0) <= 1e-9,
              fmt(s3.value - 5.0 / 6.0));

        Grid1D gn3 = make_grid_unit_weights(0.0, 2.0, 3);
        MarginalDensity mun3 = uniform_marginal(gn3, 3);
        MmotProblem prn3 = make_mmot_problem(mun3, 3, coulomb_cost(gn3, -1.0, true));
        MmotSolution sn3 = solve_mmot(prn3);
        MmotSolution bn3 = brute_force_mmot(prn3);
        s.add("N=3 solver agrees with exhaustive vertex search",
              sn3.status == SolveStatus::optimal && std::abs(sn3.value - bn3.value) <= 1e-9,
              fmt(sn3.value - bn3.value));

        Grid1D g2 = make_grid_unit_weights(0.0, 1.0, 2);
        MarginalDensity mu23 = uniform_marginal(g2, 3);
        MmotSolution inf3 = solve_mmot(make_mmot_problem(mu23, 3, coulomb_cost(g2, -1.0, true)));
        s.add("N=3 on two nodes with forbidden diagonal is infeasible",
              inf3.status == SolveStatus::infeasible);

        std::vector<double> point(g2.n, 0.0);
        point[0] = 1.0;
        MarginalDensity mupoint = make_marginal(g2, point, 2);
        CostMatrix cap = coulomb_cost(g2, 7.5, false);
        MmotSolution sp = solve_mmot(make_mmot_problem(mupoint, 2, cap));
        s.add("point-mass marginal forces the capped self-interaction",
              std::abs(sp.value - 7.5) <= 1e-9, fmt(sp.value - 7.5));
    }
    {
        Grid1D g = make_grid_unit_weights(0.0, 7.0, 8);
        MarginalDensity mu = uniform_marginal(g, 2);
        MmotProblem pr = make_mmot_problem(mu, 2, coulomb_cost(g, -1.0, true));
        MmotSolution a = solve_mmot(pr);
        MmotSolution b = brute_force_mmot(pr);  // unit-mass assignment route
        s.add("solver agrees with the assignment oracle on n=8",
              std::abs(a.value - b.value) <= 1e-9, fmt(a.value - b.value));
        TransportPlan sym = canonical_symmetrized(a);
        const double cs = coulomb_energy(sym, coulomb_cost(g, -1.0, false));
        s.add("symmetrization leaves the optimal cost unchanged",
              std::abs(cs - a.value) <= 1e-12, fmt(cs - a.value));
        // optimality certificate against feasible competitors
        bool cert = true;
        for (int r = 0; r < (quick ? 2 : 6); ++r) {
            TransportPlan comp = project(random_symmetric_plan(g, 2, rng), mu);
            if (coulomb_energy(comp, coulomb_cost(g, -1.0, false)) < a.value - 1e-9) cert = false;
        }
        TransportPlan rec = recovery_plan(sym, mu, 1e-9, 1e-9);
        if (coulomb_energy(rec, coulomb_cost(g, -1.0, false)) < a.value - 1e-9) cert = false;
        s.add("optimal value lower-bounds every feasible competitor", cert);
    }
    {
        // Monge structure diagnostics
        Grid1D g = make_grid_unit_weights(0.0, 1.0, 2);
        MarginalDensity mu = make_marginal(g, {0.5, 0.5}, 2);
        MmotSolution sol = solve_mmot(make_mmot_problem(mu, 2, coulomb_cost(g, -1.0, true)));
        MongeDiagnostic d1 = monge_diagnostic(sol);
        s.add("two-node minimizer is Monge with the swap map",
              d1.monge_strict && d1.maps[0][0] == 1 && d1.maps[0][1] == 0);

        // symmetrized cyclic-shift plan: not strict, Monge up to symmetrization
        Grid1D g3 = make_grid_unit_weights(0.0, 2.0, 3);
        DTensor cyc(3, 2);
        cyc.v[0 * 3 + 1] = 1.0 / 3.0;
        cyc.v[1 * 3 + 2] = 1.0 / 3.0;
        cyc.v[2 * 3 + 0] = 1.0 / 3.0;
        TransportPlan cplan = symmetrize(make_plan(g3, 2, cyc, false, true));
        MmotSolution fake;
        fake.plan = cplan;
        fake.value = 0.0;
        fake.status = SolveStatus::optimal;
        MongeDiagnostic d2 = monge_diagnostic(fake);
        s.add("symmetrized shift plan: Monge only up to symmetrization",
              !d2.monge_strict && d2.monge_up_to_symmetrization);

        MarginalDensity mu3 = uniform_marginal(g3, 2);
        MmotSolution prod;
        prod.plan = product_plan(mu3, 2);
        prod.value = 0.0;
        prod.status = SolveStatus::optimal;
        MongeDiagnostic d3 = monge_diagnostic(prod);
        s.add("product plan is not Monge-like",
              !d3.monge_strict && !d3.monge_up_to_symmetrization);
    }

    // --- semiclassical ---
    {
        Grid1D g = make_grid_unit_weights(0.0, 7.0, 8);
        MarginalDensity mu = uniform_marginal(g, 2);
        CostMatrix cap = coulomb_cost(g, -1.0, false);
        Wavefunction psi = wf_from_plan_sqrt(product_plan(mu, 2));
        const double e0 = bosonic_energy(psi, 0.0, cap);
        const double vee = coulomb_energy(product_plan(mu, 2), cap);
        s.add("bosonic energy at alpha=0 is the interaction energy",
              std::abs(e0 - vee) <= 1e-12, fmt(e0 - vee));
        const double t = kinetic_energy(psi);
        const double e1 = bosonic_energy(psi, 0.5, cap);
        const double e2 = bosonic_energy(psi, 1.0, cap);
        s.add("bosonic energy is linear in alpha",
              std::abs((e2 - e1) - 0.5 * t) <= 1e-11, fmt((e2 - e1) - 0.5 * t));

        SweepConfig cfg;
        cfg.mu = mu;
        cfg.n_bodies = 2;
        cfg.alphas = {1.0, 1e-2, 1e-4};
        cfg.epsilon_schedule = {1e-9, 0.3};
        cfg.beta_schedule = {1e-9, 0.05};
        cfg.optimizer.max_iterations = quick ? 120 : 300;
        SweepResult sw = semiclassical_sweep(cfg);
        bool nonneg = true;
        for (const auto& r : sw.records) nonneg = nonneg && r.gap >= -1e-9;
        s.add("sweep gaps are nonnegative", nonneg);
        s.add("sweep gap shrinks from the largest to the smallest coupling",
              sw.records.back().gap < sw.records.front().gap,
              fmt(sw.records.front().gap) + " -> " + fmt(sw.records.back().gap));
        s.add("weak-convergence proxy: moments near the transport minimizer or mismatch reported",
              sw.final_moment_deviation <= 0.05 || sw.minimizer_mismatch,
              "max rel dev " + fmt(sw.final_moment_deviation));
    }

    // --- fermionization ---
    {
        s.add("node profile: s(0)=0, c(0)=1, s(+-1)=+-1, c(+-1)=0",
              node_s(0.0) == 0.0 && node_c(0.0) == 1.0 && node_s(1.0) == 1.0 &&
                  node_s(-1.0) == -1.0 && node_c(1.0) == 0.0 && node_c(-1.0) == 0.0);
        Grid1D g = make_grid(0.0, 1.0, quick ? 9 : 17);
        const int nb = 2;
        NodeFunctions nf = make_node_functions(2.0 * g.h, g, nb);
        double identity = 0.0, antisym = 0.0;
        DTensor swapped = permute_axes(nf.A, {1, 0});
        for (std::size_t i = 0; i < nf.A.size(); ++i) {
            identity = std::max(identity,
                                std::abs(nf.A.v[i] * nf.A.v[i] + nf.B.v[i] * nf.B.v[i] - 1.0));
            antisym = std::max(antisym, std::abs(swapped.v[i] + nf.A.v[i]));
        }
        s.add("node functions satisfy A^2+B^2=1 pointwise", identity <= 1e-12, fmt(identity));
        s.add("A is exactly antisymmetric", antisym <= 1e-15, fmt(antisym));

        // discrete Lipschitz bound for B
        const std::vector<double> dmat = gradient_matrix(g);
        DTensor db = kern::apply_axis(nf.B, dmat, 0);
        double slope = 0.0;
        for (double x : db.v) slope = std::max(slope, std::abs(x));
        s.add("discrete slope of B stays under the explicit bound",
              slope <= 1.1 * node_b_slope_bound(nb, nf.delta),
              fmt(slope) + " vs " + fmt(node_b_slope_bound(nb, nf.delta)));

        // insertion identities
        std::vector<double> dens(g.n);
        for (int i = 0; i < g.n; ++i) dens[i] = 1.0 + 0.3 * std::sin(2.0 * kPi * g.nodes[i]);
        MarginalDensity mu = make_marginal(g, dens, nb, true);
        Wavefunction phi = wf_from_plan_sqrt(product_plan(mu, nb));
        NodeInsertion ins = insert_node(phi, nf);
        DTensor phi2 = wf_position_density(phi);
        double squeeze = 0.0;
        for (std::size_t i = 0; i < phi2.size(); ++i) {
            if (ins.rho_N.v[i] < -1e-15 || ins.rho_N.v[i] > phi2.v[i] + 1e-12) squeeze = 1.0;
        }
        s.add("inserted density is squeezed between 0 and |phi|^2", squeeze == 0.0);

        CostMatrix c = coulomb_cost(g);
        const double vphi = coulomb_energy_tensor(phi2, g, c);
        double prev = std::numeric_limits<double>::infinity();
        bool monotone = true;
        for (double delta : {4.0 * g.h, 2.0 * g.h, g.h}) {
            NodeFunctions nfd = make_node_functions(delta, g, nb);
            NodeInsertion insd = insert_node(phi, nfd);
            const double diff = std::abs(coulomb_energy_tensor(insd.rho_N, g, c) - vphi);
            if (diff > prev + 1e-12) monotone = false;
            prev = diff;
        }
        s.add("interaction energy converges monotonically under node shrinking", monotone,
              "final |diff| " + fmt(prev));

        ExcessDensity ex = excess_density(phi, nf);
        DTensor phip2 = wf_position_density(ex.phi_prime);
        double split = 0.0;
        for (std::size_t i = 0; i < phi2.size(); ++i)
            split = std::max(split, std::abs(phip2.v[i] + ins.rho_N.v[i] - phi2.v[i]));
        s.add("density split |phi'|^2 + rho_N = |phi|^2 is pointwise exact", split <= 1e-12,
              fmt(split));
        double neg = 0.0;
        for (double x : ex.rho_prime) neg = std::min(neg, x);
        s.add("excess density is nonnegative", neg >= 0.0, fmt(neg));
    }
    {
        // matching and spin bookkeeping on a small grid
        Grid1D g = make_grid(0.0, 1.0, 9);
        std::vector<double> dens(g.n);
        for (int i = 0; i < g.n; ++i) dens[i] = 1.0 + 0.2 * std::cos(2.0 * kPi * g.nodes[i]);
        MarginalDensity mu = make_marginal(g, dens, 2, true);
        Wavefunction phi = wf_from_plan_sqrt(product_plan(mu, 2));
        NodeFunctions nf = make_node_functions(2.0 * g.h, g, 2);
        NodeInsertion ins = insert_node(phi, nf);

        // a second real antisymmetric state from two real orbitals
        std::vector<SpinOrbital> orbs(2);
        orbs[0].up.assign(g.n, 0.0);
        orbs[0].dn.assign(g.n, 0.0);
        orbs[1] = orbs[0];
        for (int i = 0; i < g.n; ++i) {
            orbs[0].up[i] = std::sqrt(2.0) * std::sin(kPi * g.nodes[i]);
            orbs[1].up[i] = std::sqrt(2.0) * std::sin(2.0 * kPi * g.nodes[i]);
        }
        // orthonormalize under the grid quadrature
        double n0 = 0.0;
        for (int i = 0; i < g.n; ++i) n0 += g.weights[i] * std::norm(orbs[0].up[i]);
        for (int i = 0; i < g.n; ++i) orbs[0].up[i] /= std::sqrt(n0);
        std::complex<double> ip01 = 0.0;
        for (int i = 0; i < g.n; ++i)
            ip01 += g.weights[i] * std::conj(orbs[0].up[i]) * orbs[1].up[i];
        for (int i = 0; i < g.n; ++i) orbs[1].up[i] -= ip01 * orbs[0].up[i];
        double n1 = 0.0;
        for (int i = 0; i < g.n; ++i) n1 += g.weights[i] * std::norm(orbs[1].up[i]);
        for (int i = 0; i < g.n; ++i) orbs[1].up[i] /= std::sqrt(n1);

        Wavefunction det = slater_determinant(g, orbs);
        Wavefunction matched = match_wavefunctions(ins.psi_delta, det);
        DTensor da = wf_position_density(ins.psi_delta);
        DTensor db2 = wf_position_density(det);
        DTensor dm = wf_position_density(matched);
        double derr = 0.0;
        for (std::size_t i = 0; i < dm.size(); ++i)
            derr = std::max(derr, std::abs(dm.v[i] - da.v[i] - db2.v[i]));
        s.add("matched state adds densities without interference", derr <= 1e-12, fmt(derr));
        CostMatrix c = coulomb_cost(g);
        const double vsum = coulomb_energy_tensor(da, g, c) + coulomb_energy_tensor(db2, g, c);
        const double vm = coulomb_energy_tensor(dm, g, c);
        s.add("matched state adds interaction energies", std::abs(vm - vsum) <= 1e-10,
              fmt(vm - vsum));
        // plain sum exhibits the interference term
        Wavefunction plain = make_wavefunction(g, 2, true);
        for (int b = 0; b < plain.block_count(); ++b)
            for (std::size_t i = 0; i < plain.blocks[b].size(); ++i)
                plain.blocks[b].v[i] = ins.psi_delta.blocks[b].v[i] + det.blocks[b].v[i];
        DTensor dplain = wf_position_density(plain);
        double interference = 0.0;
        for (std::size_t i = 0; i < dplain.size(); ++i)
            interference = std::max(interference, std::abs(dplain.v[i] - da.v[i] - db2.v[i]));
        s.add("plain sum shows the interference term the matching avoids", interference > 1e-6,
              fmt(interference));

        auto [dx, dir] = slater_vee(g, orbs, c);
        s.add("determinant interaction is at most the direct term", dx <= dir + 1e-10,
              fmt(dir - dx));
        BosFerRelation rel = bosonic_fermionic_relation(det, c);
        s.add("bosonic kinetic energy does not exceed the fermionic one",
              rel.t_bosonic <= rel.t_fermionic * (1.0 + 1e-3),
              fmt(rel.t_bosonic / rel.t_fermionic));
        s.add("spin-summed amplitude keeps the interaction energy", rel.vee_equal);

        // two-point interaction bound with explicit constant (d=1 report)
        const double c0 = 2.0 * std::cbrt(8.0 * kPi / 3.0);
        std::vector<double> fv(g.n), gv(g.n);
        for (int i = 0; i < g.n; ++i) {
            fv[i] = 1.0 + 0.5 * std::sin(2.0 * kPi * g.nodes[i]);
            gv[i] = 1.0 + 0.5 * std::cos(4.0 * kPi * g.nodes[i]);
        }
        double lhs = 0.0;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                lhs += g.weights[i] * g.weights[j] * fv[i] * gv[j] *
                       c.values[static_cast<std::size_t>(i) * g.n + j];
        const double rhs = c0 * l1_norm(g, fv) * l1_l3_norm(g, gv);
        s.add("[report, d=1 caveat] two-point interaction bound with c0", std::abs(lhs) <= rhs,
              fmt(std::abs(lhs) / rhs), false);
    }

    // --- orbital representation ---
    {
        Grid1D g = make_grid(0.0, 1.0, 401);
        std::vector<double> lin(g.n);
        for (int i = 0; i < g.n; ++i) lin[i] = 2.0 * g.nodes[i];
        MarginalDensity vlin = make_marginal(g, lin, 2, true);
        MonotoneMap m = standard_map(vlin);
        double ferr = 0.0;
        for (int i = 0; i < g.n; ++i)
            ferr = std::max(ferr, std::abs(m.F[i] - g.nodes[i] * g.nodes[i]));
        s.add("cumulative of v=2y is y^2", ferr <= 1e-4, fmt(ferr));

        MarginalDensity uni = uniform_marginal(g, 2);
        MonotoneMap mid = standard_map(uni);
        double iderr = 0.0;
        for (int i = 0; i < g.n; ++i) iderr = std::max(iderr, std::abs(mid.F[i] - g.nodes[i]));
        s.add("uniform density gives the identity map", iderr <= 1e-12, fmt(iderr));

        // unitarity of the lift on a small function panel
        std::vector<std::function<std::complex<double>(double)>> panel = {
            [](double) { return std::complex<double>(1.0, 0.0); },
            [](double t) { return std::complex<double>(t, 0.0); },
            [](double t) { return std::exp(std::complex<double>(0.0, 2.0 * kPi * t)); },
            [](double t) { return std::complex<double>(std::sin(2.0 * kPi * t), 0.0); },
            [](double t) { return std::complex<double>(t * t - 0.5, 0.3 * t); }};
        Grid1D gf = make_grid(0.0, 1.0, 4001);
        std::vector<double> linf(gf.n);
        for (int i = 0; i < gf.n; ++i) linf[i] = 2.0 * gf.nodes[i];
        MarginalDensity vf = make_marginal(gf, linf, 2, true);
        Grid1D gs = make_grid(0.0, 1.0, 4001);
        double uerr = 0.0;
        for (std::size_t a = 0; a < panel.size(); ++a)
            for (std::size_t b = 0; b < panel.size(); ++b) {
                std::complex<double> ref = 0.0;
                for (int i = 0; i < gs.n; ++i)
                    ref += gs.weights[i] * std::conj(panel[a](gs.nodes[i])) * panel[b](gs.nodes[i]);
                std::vector<std::complex<double>> la = lift(panel[a], vf);
                std::vector<std::complex<double>> lb = lift(panel[b], vf);
                std::complex<double> got = 0.0;
                for (int i = 0; i < gf.n; ++i)
                    got += gf.weights[i] * std::conj(la[i]) * lb[i];
                uerr = std::max(uerr, std::abs(got - ref));
            }
        s.add("lift is unitary on a five-function panel", uerr <= 1e-6, fmt(uerr));

        for (OrbitalKind kind : {OrbitalKind::complex_exp, OrbitalKind::real_trig}) {
            for (const MarginalDensity* dens : {&uni, &vlin}) {
                MarginalDensity md = *dens;
                md.particle_count = 5;
                OrbitalSet os = harriman_orbitals(md, kind);
                double oerr = 0.0, derr = 0.0;
                for (int a = 0; a < os.count; ++a)
                    for (int b = 0; b < os.count; ++b) {
                        const double target = (a == b) ? 1.0 : 0.0;
                        oerr = std::max(oerr,
                                        std::abs(orbital_inner_product(os, a, b) - target));
                    }
                for (int i = 0; i < g.n; ++i) {
                    double sum = 0.0;
                    for (int k = 0; k < os.count; ++k) sum += std::norm(os.values[k][i]);
                    derr = std::max(derr, std::abs(sum - 5.0 * md.values[i]));
                }
                const std::string tag = (kind == OrbitalKind::complex_exp ? "complex" : "real");
                s.add("orbitals orthonormal and density-exact (" + tag + ")",
                      oerr <= 1e-8 && derr <= 1e-10, fmt(oerr) + " / " + fmt(derr));
            }
        }

        MarginalDensity u1 = uni;
        u1.particle_count = 1;
        OrbitalSet os_u = harriman_orbitals(u1, OrbitalKind::complex_exp);
        RegularityReport ru = regularity_check(os_u);
        s.add("gradient formula matches finite differences (uniform, k=1)",
              ru.gradient_formula_error <= 1e-3, fmt(ru.gradient_formula_error));
        MarginalDensity v1 = vlin;
        v1.particle_count = 1;
        OrbitalSet os_v = harriman_orbitals(v1, OrbitalKind::complex_exp);
        RegularityReport rv = regularity_check(os_v);
        s.add("gradient formula matches finite differences (v=2y, k=1)",
              rv.gradient_formula_error <= 1e-2, fmt(rv.gradient_formula_error));
        s.add("sup of the one-body density of v=2y is 2", std::abs(rv.m1v_bound - 2.0) <= 1e-2,
              fmt(rv.m1v_bound));
    }
    {
        // antisymmetric representation of a density via real orbitals
        Grid1D g = make_grid(0.0, 1.0, 33);
        MarginalDensity mu = uniform_marginal(g, 3);
        OrbitalSet os = harriman_orbitals(mu, OrbitalKind::real_trig);
        std::vector<SpinOrbital> orbs(3);
        for (int k = 0; k < 3; ++k) {
            orbs[k].up.assign(os.values[k].begin(), os.values[k].end());
            orbs[k].dn.assign(g.n, 0.0);
        }
        Wavefunction det = slater_determinant(g, orbs);
        DTensor dens = wf_position_density(det);
        DTensor m1 = dens;
        for (int axis = 2; axis >= 1; --axis) m1 = kern::contract_axis(m1, g.weights, axis);
        double err = 0.0;
        for (int i = 0; i < g.n; ++i)
            err = std::max(err, std::abs(3.0 * m1.v[i] - 3.0 * mu.values[i]));
        s.add("determinant of real orbitals reproduces the density", err <= 1e-8, fmt(err));
    }

    // --- variational counterexample ---
    {
        PathFunction ramp = power_profile(quick ? 1001 : 2001, 1.0);
        const double j = mania_J(ramp);
        s.add("J on the linear ramp equals 8/105", std::abs(j - 8.0 / 105.0) <= 1e-4,
              fmt(j - 8.0 / 105.0));
        s.add("T on the linear ramp equals 1", std::abs(kinetic_T(ramp) - 1.0) <= 1e-12);
        s.add("chain-of-constraints value matches J", constraint_chain_check(ramp) <= 1e-10);

        double prev = 0.0;
        bool growing = true;
        for (int n : {100, 1000, 10000}) {
            const double t = kinetic_T(power_profile(n, 1.0 / 3.0));
            if (t <= prev) growing = false;
            prev = t;
        }
        s.add("kinetic energy of x^(1/3) grows without bound under refinement", growing,
              fmt(prev));

        s.add("cauchy-schwarz path bound never violated",
              csi_bound_check(ramp) <= 1e-12 &&
                  csi_bound_check(power_profile(501, 0.5)) <= 1e-10);

        const double c78 = (7.0 / 8.0) * (7.0 / 8.0);
        const double lhsc = c78 * std::pow(0.3, 6) * (5.0 / 3.0);
        const double rhsc = 0.5 * c78 * std::pow(0.3, 5);
        s.add("certificate constants are algebraically consistent",
              std::abs(lhsc - rhsc) <= 1e-18, fmt(lhsc - rhsc));

        const int n = quick ? 501 : 2001;
        PerturbedMin pm = minimize_perturbed(1e-2, n, quick ? 40 : 120);
        s.add("perturbed minimum stays above the gap constant", pm.value > 9.0e-4,
              fmt(pm.value));
        GapCertificate cert = gap_certificate(pm.u);
        const double jmin = mania_J(pm.u);
        s.add("lower-bound chain J >= G >= explicit constant",
              jmin >= cert.g_value - 1e-12 && cert.g_value >= cert.bound * (1.0 - 5e-2) &&
                  cert.bound >= rhsc * (1.0 - 1e-12),
              fmt(jmin) + " >= " + fmt(cert.g_value) + " >= " + fmt(cert.bound));

        std::vector<double> third(n);
        Grid1D gl = make_grid(0.0, 1.0, n);
        for (int i = 0; i < n; ++i) third[i] = std::cbrt(gl.nodes[i]);
        PerturbedMin unpert = minimize_perturbed(0.0, n, quick ? 40 : 120, {third});
        s.add("without the kinetic term J is driven below 1e-3", unpert.value < 1e-3,
              fmt(unpert.value));
    }

    return s.out;
}

}  // namespace sce
