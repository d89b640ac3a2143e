#include "scelab/reinstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sce {

CouplingKernel build_coupling(const MarginalDensity& mu_A, const MarginalDensity& mu_B) {
    require(mu_A.grid.same_as(mu_B.grid), "coupling: grid mismatch");
    const int n = mu_A.grid.n;
    CouplingKernel k;
    k.grid = mu_A.grid;
    k.f.resize(n);
    k.f_A.resize(n);
    k.f_B.resize(n);
    for (int i = 0; i < n; ++i) {
        k.f[i] = std::min(mu_A.values[i], mu_B.values[i]);
        k.f_A[i] = mu_A.values[i] - k.f[i];
        k.f_B[i] = mu_B.values[i] - k.f[i];
    }
    k.mass_fB = quadrature(k.grid, k.f_B);
    return k;
}

std::vector<double> coupling_matrix(const CouplingKernel& k) {
    const int n = k.grid.n;
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (k.mass_fB > 0.0)
            for (int j = 0; j < n; ++j)
                m[static_cast<std::size_t>(i) * n + j] = k.f_B[i] * k.f_A[j] / k.mass_fB;
        m[static_cast<std::size_t>(i) * n + i] += k.f[i] / k.grid.weights[i];
    }
    return m;
}

std::vector<double> transition_matrix(const CouplingKernel& k, const std::vector<double>& mu_A) {
    const int n = k.grid.n;
    std::vector<double> q(static_cast<std::size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        if (mu_A[j] <= 0.0) continue;  // no mass there, quotient defined as 0
        for (int i = 0; i < n; ++i) {
            double val = (k.mass_fB > 0.0) ? k.f_B[i] * k.f_A[j] * k.grid.weights[j] /
                                                 (k.mass_fB * mu_A[j])
                                           : 0.0;
            if (i == j) val += k.f[i] / mu_A[j];
            q[static_cast<std::size_t>(i) * n + j] = val;
        }
    }
    return q;
}

// Marginal of the plan along axis 0, which doubles as mu_A, plus a check that
// the plan does not put mass where that marginal vanishes.
static std::vector<double> derive_mu_A(const TransportPlan& p) {
    std::vector<double> mu = one_body_marginal(p, 0);
    for (int axis = 1; axis < p.n_bodies; ++axis) {
        std::vector<double> other = one_body_marginal(p, axis);
        for (int i = 0; i < p.grid.n; ++i)
            require(std::abs(other[i] - mu[i]) <= 1e-9,
                    "project: one-body marginals differ across coordinates");
    }
    return mu;
}

static void check_support(const TransportPlan& p, const std::vector<double>& mu_A) {
    // mu_A(j) = 0 forces the whole slice to vanish; tolerate rounding only
    MultiIndex mi(p.grid.n, p.n_bodies);
    std::size_t f = 0;
    do {
        bool zero_col = false;
        for (int k = 0; k < p.n_bodies; ++k)
            if (mu_A[mi.idx[k]] <= 0.0) zero_col = true;
        if (zero_col && std::abs(p.values.v[f]) > 1e-12)
            fail("project: plan mass on a node where mu_A vanishes");
        ++f;
    } while (mi.advance());
}

TransportPlan project(const TransportPlan& plan_A, const MarginalDensity& mu_B) {
    require(plan_A.grid.same_as(mu_B.grid), "project: grid mismatch");
    const std::vector<double> mu_A = derive_mu_A(plan_A);
    check_support(plan_A, mu_A);
    CouplingKernel k = build_coupling(make_marginal(plan_A.grid, mu_A, plan_A.n_bodies, true), mu_B);
    const std::vector<double> q = transition_matrix(k, mu_A);
    DTensor t = plan_A.values;
    for (int axis = 0; axis < plan_A.n_bodies; ++axis) t = kern::apply_axis(t, q, axis);
    return make_plan(plan_A.grid, plan_A.n_bodies, std::move(t), plan_A.symmetric, false);
}

TransportPlan project_via_expansion(const TransportPlan& plan_A, const MarginalDensity& mu_B) {
    require(plan_A.grid.same_as(mu_B.grid), "project: grid mismatch");
    const int n = plan_A.grid.n;
    const int nb = plan_A.n_bodies;
    const std::vector<double> mu_A = derive_mu_A(plan_A);
    check_support(plan_A, mu_A);
    CouplingKernel k = build_coupling(make_marginal(plan_A.grid, mu_A, nb, true), mu_B);

    // diagonal part: D(i,j) = delta_ij f(i)/mu_A(i)
    std::vector<double> dmat(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        if (mu_A[i] > 0.0) dmat[static_cast<std::size_t>(i) * n + i] = k.f[i] / mu_A[i];
    // rank-one part: R(i,j) = f_B(i) f_A(j) w_j / (mu_A(j) int f_B)
    std::vector<double> rmat(static_cast<std::size_t>(n) * n, 0.0);
    if (k.mass_fB > 0.0)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (mu_A[j] > 0.0)
                    rmat[static_cast<std::size_t>(i) * n + j] =
                        k.f_B[i] * k.f_A[j] * plan_A.grid.weights[j] / (k.mass_fB * mu_A[j]);

    DTensor acc(n, nb);
    for (unsigned subset = 0; subset < (1u << nb); ++subset) {
        DTensor t = plan_A.values;
        for (int axis = 0; axis < nb; ++axis)
            t = kern::apply_axis(t, (subset & (1u << axis)) ? rmat : dmat, axis);
        for (std::size_t i = 0; i < acc.size(); ++i) acc.v[i] += t.v[i];
    }
    return make_plan(plan_A.grid, nb, std::move(acc), plan_A.symmetric, false);
}

std::pair<double, double> l1_stability_check(const TransportPlan& plan_A,
                                             const MarginalDensity& mu_B) {
    const std::vector<double> mu_A = derive_mu_A(plan_A);
    TransportPlan proj = project(plan_A, mu_B);
    DTensor diff = plan_A.values;
    for (std::size_t i = 0; i < diff.size(); ++i) diff.v[i] = std::abs(diff.v[i] - proj.values.v[i]);
    const double lhs = kern::weighted_sum(diff, plan_A.grid.weights);
    std::vector<double> d(plan_A.grid.n);
    for (int i = 0; i < plan_A.grid.n; ++i) d[i] = mu_A[i] - mu_B.values[i];
    const double c_n = std::pow(2.0, plan_A.n_bodies - 1) + 0.5 * (plan_A.n_bodies - 1);
    return {lhs, c_n * l1_norm(plan_A.grid, d)};
}

TransportPlan smooth(const TransportPlan& p, const MollifierKernel& k) {
    const std::vector<double> s = smoothing_matrix(k, p.grid);
    DTensor t = p.values;
    for (int axis = 0; axis < p.n_bodies; ++axis) t = kern::apply_axis(t, s, axis);
    return make_plan(p.grid, p.n_bodies, std::move(t), p.symmetric, false);
}

std::vector<double> smooth_density(const Grid1D& g, const std::vector<double>& values,
                                   const MollifierKernel& k) {
    const std::vector<double> s = smoothing_matrix(k, g);
    const int n = g.n;
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += s[static_cast<std::size_t>(i) * n + j] * values[j];
        out[i] = acc;
    }
    return out;
}

TransportPlan strong_positivize(const TransportPlan& p, double beta) {
    require(beta > 0.0 && beta < 1.0, "strong_positivize: beta must lie in (0,1)");
    require(p.symmetric, "strong_positivize: plan must be symmetric");
    const int n = p.grid.n;
    const int nb = p.n_bodies;
    const std::vector<double> mu = one_body_marginal(p, 0);
    DTensor out = p.values;
    for (double& x : out.v) x *= (1.0 - beta);
    for (int i = 0; i < nb; ++i) {
        DTensor rest = marginal_without_axis(p, i);  // N-1 axes, original order
        // outer product mu(x_i) * rest(other coords), folded back into N axes
        MultiIndex mi(n, nb);
        std::size_t f = 0;
        do {
            int ridx[8];
            int r = 0;
            for (int k = 0; k < nb; ++k)
                if (k != i) ridx[r++] = mi.idx[k];
            out.v[f] += (beta / nb) * mu[mi.idx[i]] * rest.v[flat_index(n, nb - 1, ridx)];
            ++f;
        } while (mi.advance());
    }
    return make_plan(p.grid, nb, std::move(out), true, false);
}

StrongPositivity is_strongly_positive(const TransportPlan& p) {
    const int n = p.grid.n;
    const int nb = p.n_bodies;
    const std::vector<double> mu = one_body_marginal(p, 0);
    StrongPositivity sp;
    sp.best_beta = std::numeric_limits<double>::infinity();
    for (int i = 0; i < nb; ++i) {
        const std::vector<double> mu_i = one_body_marginal(p, i);
        DTensor rest = marginal_without_axis(p, i);
        MultiIndex mi(n, nb);
        std::size_t f = 0;
        do {
            int ridx[8];
            int r = 0;
            for (int k = 0; k < nb; ++k)
                if (k != i) ridx[r++] = mi.idx[k];
            const double denom = mu_i[mi.idx[i]] * rest.v[flat_index(n, nb - 1, ridx)];
            if (denom > 0.0) sp.best_beta = std::min(sp.best_beta, p.values.v[f] / denom);
            ++f;
        } while (mi.advance());
    }
    if (!std::isfinite(sp.best_beta)) sp.best_beta = 0.0;
    sp.holds = sp.best_beta > 0.0;
    return sp;
}

std::pair<double, double> coulomb_stability_check(const TransportPlan& plan_A,
                                                  const MarginalDensity& mu_B,
                                                  const CostMatrix& cost) {
    const std::vector<double> mu_A = derive_mu_A(plan_A);
    TransportPlan proj = project(plan_A, mu_B);
    const double lhs = coulomb_energy(proj, cost);
    std::vector<double> d(plan_A.grid.n);
    for (int i = 0; i < plan_A.grid.n; ++i) d[i] = mu_A[i] - mu_B.values[i];
    const double pairs = 0.5 * plan_A.n_bodies * (plan_A.n_bodies - 1);
    const double rhs = coulomb_energy(plan_A, cost) +
                       coulomb_stability_constant() * pairs * l1_l3_norm(plan_A.grid, d);
    return {lhs, rhs};
}

TransportPlan recovery_plan(const TransportPlan& gamma, const MarginalDensity& mu_target,
                            double epsilon, double beta) {
    require(epsilon > 0.0 && beta > 0.0, "recovery_plan: epsilon and beta must be positive");
    TransportPlan smoothed = smooth(gamma, gaussian_mollifier(epsilon, gamma.grid));
    TransportPlan positivized = strong_positivize(smoothed, beta);
    return project(positivized, mu_target);
}

}  // namespace sce
