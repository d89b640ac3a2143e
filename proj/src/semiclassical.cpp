#include "scelab/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace sce {

double bosonic_energy(const Wavefunction& psi, double alpha, const CostMatrix& cost) {
    DTensor dens = wf_position_density(psi);
    return alpha * kinetic_energy(psi) + coulomb_energy_tensor(dens, psi.grid, cost);
}

namespace {

std::vector<double> transpose_matrix(const std::vector<double>& m, int n) {
    std::vector<double> t(m.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t[static_cast<std::size_t>(j) * n + i] = m[static_cast<std::size_t>(i) * n + j];
    return t;
}

struct EnergyModel {
    const Grid1D& grid;
    int n_bodies;
    double alpha;
    const CostMatrix& cost;
    std::vector<double> d, dt;      // gradient matrix and transpose
    DTensor cost_field;             // C(t) per tuple
    std::vector<double> wprod;      // tuple weights, flattened

    EnergyModel(const Grid1D& g, int nb, double a, const CostMatrix& c)
        : grid(g), n_bodies(nb), alpha(a), cost(c) {
        d = gradient_matrix(g);
        dt = transpose_matrix(d, g.n);
        cost_field = DTensor(g.n, nb);
        wprod.resize(cost_field.size());
        MultiIndex mi(g.n, nb);
        std::size_t f = 0;
        do {
            double s = 0.0;
            for (int a1 = 0; a1 < nb; ++a1)
                for (int b1 = a1 + 1; b1 < nb; ++b1)
                    s += c.values[static_cast<std::size_t>(mi.idx[a1]) * g.n + mi.idx[b1]];
            cost_field.v[f] = s;
            wprod[f] = tuple_weight(g.weights, nb, mi.idx.data());
            ++f;
        } while (mi.advance());
    }

    double energy(const DTensor& psi) const {
        double t = 0.0;
        for (int axis = 0; axis < n_bodies; ++axis) {
            DTensor g = kern::apply_axis(psi, d, axis);
            double acc = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) acc += wprod[i] * g.v[i] * g.v[i];
            t += acc;
        }
        double v = 0.0;
        for (std::size_t i = 0; i < psi.size(); ++i)
            v += wprod[i] * cost_field.v[i] * psi.v[i] * psi.v[i];
        return alpha * t + v;
    }

    DTensor gradient(const DTensor& psi) const {
        DTensor g(psi.n, psi.axes);
        for (int axis = 0; axis < n_bodies; ++axis) {
            DTensor y = kern::apply_axis(psi, d, axis);
            for (std::size_t i = 0; i < y.size(); ++i) y.v[i] *= wprod[i];
            DTensor back = kern::apply_axis(y, dt, axis);
            for (std::size_t i = 0; i < g.size(); ++i) g.v[i] += 2.0 * alpha * back.v[i];
        }
        for (std::size_t i = 0; i < g.size(); ++i)
            g.v[i] += 2.0 * wprod[i] * cost_field.v[i] * psi.v[i];
        return g;
    }
};

// Removes from g its components along the marginal-constraint gradients at
// psi, so a small step keeps every one-body marginal to second order and the
// restoration projection only has to absorb O(step^2) drift.
DTensor tangent_project(const DTensor& g, const DTensor& psi, const Grid1D& grid, int nb) {
    const int n = grid.n;
    const int m = nb * n;
    std::vector<double> gram(static_cast<std::size_t>(m) * m, 0.0);
    std::vector<double> rhs(m, 0.0);
    // constraint gradients u_{a,v}(t) = 2 psi(t) wrest_a(t) [t_a = v]
    MultiIndex mi(n, nb);
    std::size_t f = 0;
    do {
        double wprod = 1.0;
        for (int k = 0; k < nb; ++k) wprod *= grid.weights[mi.idx[k]];
        int rows[8];
        double uval[8];
        for (int a = 0; a < nb; ++a) {
            rows[a] = a * n + mi.idx[a];
            uval[a] = 2.0 * psi.v[f] * wprod / grid.weights[mi.idx[a]];
        }
        for (int a = 0; a < nb; ++a) {
            rhs[rows[a]] += uval[a] * g.v[f];
            for (int b = 0; b < nb; ++b)
                gram[static_cast<std::size_t>(rows[a]) * m + rows[b]] += uval[a] * uval[b];
        }
        ++f;
    } while (mi.advance());
    for (int i = 0; i < m; ++i) gram[static_cast<std::size_t>(i) * m + i] += 1e-12;
    // small dense solve by Gaussian elimination with partial pivoting
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r = c + 1; r < m; ++r)
            if (std::abs(gram[static_cast<std::size_t>(r) * m + c]) >
                std::abs(gram[static_cast<std::size_t>(piv) * m + c]))
                piv = r;
        if (piv != c) {
            for (int k = 0; k < m; ++k)
                std::swap(gram[static_cast<std::size_t>(c) * m + k],
                          gram[static_cast<std::size_t>(piv) * m + k]);
            std::swap(rhs[c], rhs[piv]);
        }
        const double d = gram[static_cast<std::size_t>(c) * m + c];
        if (std::abs(d) < 1e-14) continue;
        for (int r = c + 1; r < m; ++r) {
            const double fac = gram[static_cast<std::size_t>(r) * m + c] / d;
            if (fac == 0.0) continue;
            for (int k = c; k < m; ++k)
                gram[static_cast<std::size_t>(r) * m + k] -=
                    fac * gram[static_cast<std::size_t>(c) * m + k];
            rhs[r] -= fac * rhs[c];
        }
    }
    std::vector<double> lambda(m, 0.0);
    for (int c = m - 1; c >= 0; --c) {
        const double d = gram[static_cast<std::size_t>(c) * m + c];
        if (std::abs(d) < 1e-14) continue;
        double acc = rhs[c];
        for (int k = c + 1; k < m; ++k)
            acc -= gram[static_cast<std::size_t>(c) * m + k] * lambda[k];
        lambda[c] = acc / d;
    }
    DTensor out = g;
    MultiIndex mj(n, nb);
    f = 0;
    do {
        double wprod = 1.0;
        for (int k = 0; k < nb; ++k) wprod *= grid.weights[mj.idx[k]];
        double corr = 0.0;
        for (int a = 0; a < nb; ++a)
            corr += lambda[a * n + mj.idx[a]] * 2.0 * psi.v[f] * wprod / grid.weights[mj.idx[a]];
        out.v[f] -= corr;
        ++f;
    } while (mj.advance());
    return out;
}

// |psi|^2 as a feasible plan with marginal mu (restoration via projection)
DTensor restore_feasible(const DTensor& psi, const Grid1D& grid, int nb,
                         const MarginalDensity& mu) {
    DTensor dens(psi.n, psi.axes);
    for (std::size_t i = 0; i < dens.size(); ++i) dens.v[i] = psi.v[i] * psi.v[i];
    TransportPlan plan = make_plan(grid, nb, std::move(dens), true, true);
    TransportPlan restored = project(plan, mu);
    DTensor out(psi.n, psi.axes);
    for (std::size_t i = 0; i < out.size(); ++i) out.v[i] = std::sqrt(std::max(0.0, restored.values.v[i]));
    return out;
}

}  // namespace

MinimizeResult minimize_bosonic(const MarginalDensity& mu, int n_bodies, double alpha,
                                const CostMatrix& cost, const OptimizerConfig& cfg) {
    require(alpha > 0.0, "minimize_bosonic: alpha must be positive");
    const Grid1D& grid = mu.grid;
    EnergyModel model(grid, n_bodies, alpha, cost);

    TransportPlan init = cfg.warm_start ? *cfg.warm_start : product_plan(mu, n_bodies);
    DTensor psi0(grid.n, n_bodies);
    for (std::size_t i = 0; i < psi0.size(); ++i)
        psi0.v[i] = std::sqrt(std::max(0.0, init.values.v[i]));
    DTensor psi = restore_feasible(psi0, grid, n_bodies, mu);
    double best = model.energy(psi);
    DTensor best_psi = psi;

    double step_add = cfg.step;
    double step_mul = cfg.step;
    int stall = 0;
    int it = 0;
    for (; it < cfg.max_iterations; ++it) {
        DTensor g = model.gradient(best_psi);
        DTensor gt = tangent_project(g, best_psi, grid, n_bodies);
        const double scale = 1.0 + std::abs(best);
        bool improved = false;

        // constraint-tangent step (primary direction)
        for (int tries = 0; tries < 25 && !improved; ++tries) {
            DTensor cand = best_psi;
            for (std::size_t i = 0; i < cand.size(); ++i)
                cand.v[i] = std::max(0.0, cand.v[i] - step_add * gt.v[i]);
            double mass = 0.0;
            for (std::size_t i = 0; i < cand.size(); ++i)
                mass += model.wprod[i] * cand.v[i] * cand.v[i];
            if (mass <= 0.0) {
                step_add *= 0.5;
                continue;
            }
            DTensor restored = restore_feasible(cand, grid, n_bodies, mu);
            const double e = model.energy(restored);
            if (e < best - cfg.tolerance * scale) {
                best = e;
                best_psi = std::move(restored);
                step_add = std::min(step_add * 1.3, 1e3);
                improved = true;
            } else {
                step_add *= 0.5;
                if (step_add < 1e-14) break;
            }
        }
        // multiplicative fallback: scale amplitudes by exp(-eta g / 2 psi),
        // a descent step in the entropic metric
        for (int tries = 0; tries < 20 && !improved; ++tries) {
            DTensor cand = best_psi;
            for (std::size_t i = 0; i < cand.size(); ++i) {
                if (cand.v[i] <= 0.0) continue;
                double expo = -step_mul * g.v[i] / (2.0 * cand.v[i]);
                expo = std::clamp(expo, -40.0, 40.0);
                cand.v[i] *= std::exp(expo);
            }
            DTensor restored = restore_feasible(cand, grid, n_bodies, mu);
            const double e = model.energy(restored);
            if (e < best - cfg.tolerance * scale) {
                best = e;
                best_psi = std::move(restored);
                step_mul = std::min(step_mul * 1.3, 1e3);
                improved = true;
            } else {
                step_mul *= 0.5;
                if (step_mul < 1e-14) break;
            }
        }
        if (!improved) {
            if (++stall >= 2) break;
            step_add = cfg.step;
            step_mul = cfg.step;
        } else {
            stall = 0;
        }
    }

    MinimizeResult res;
    res.psi = make_wavefunction(grid, n_bodies, false);
    for (std::size_t i = 0; i < best_psi.size(); ++i) res.psi.blocks[0].v[i] = best_psi.v[i];
    const double n2 = wf_norm2(res.psi);
    require(std::abs(n2 - 1.0) <= 1e-8, "minimize_bosonic: lost normalization");
    res.value = best;
    res.converged = it < cfg.max_iterations;
    res.iterations = it;
    return res;
}

double recovery_upper_bound(const TransportPlan& gamma_opt, const MarginalDensity& mu,
                            double alpha, double epsilon, double beta, const CostMatrix& cost) {
    TransportPlan rec = recovery_plan(gamma_opt, mu, epsilon, beta);
    Wavefunction psi = wf_from_plan_sqrt(rec);
    return bosonic_energy(psi, alpha, cost);
}

std::array<double, 5> plan_moments(const TransportPlan& p) {
    std::array<double, 5> m{};
    MultiIndex mi(p.grid.n, p.n_bodies);
    std::size_t f = 0;
    do {
        const double w =
            p.values.v[f] * tuple_weight(p.grid.weights, p.n_bodies, mi.idx.data());
        double xbar = 0.0;
        for (int k = 0; k < p.n_bodies; ++k) xbar += p.grid.nodes[mi.idx[k]];
        xbar /= p.n_bodies;
        const double pairdist =
            std::min(std::abs(p.grid.nodes[mi.idx[0]] - p.grid.nodes[mi.idx[1]]), 1.0);
        m[0] += w;
        m[1] += w * xbar;
        m[2] += w * xbar * xbar;
        m[3] += w * std::exp(-xbar);
        m[4] += w * pairdist;
        ++f;
    } while (mi.advance());
    return m;
}

SweepResult semiclassical_sweep(const SweepConfig& cfg) {
    require(!cfg.alphas.empty(), "sweep: empty alpha list");
    for (std::size_t i = 1; i < cfg.alphas.size(); ++i)
        require(cfg.alphas[i] < cfg.alphas[i - 1], "sweep: alphas must be strictly decreasing");
    const std::size_t ne = cfg.epsilon_schedule.size();
    const std::size_t nbeta = cfg.beta_schedule.size();
    require(ne == nbeta || ne == 1 || nbeta == 1 || ne == 0 || nbeta == 0,
            "sweep: schedules must have equal length or broadcast");

    const Grid1D& grid = cfg.mu.grid;
    CostMatrix strict = coulomb_cost(grid, cfg.cap, true);
    CostMatrix capped = coulomb_cost(grid, cfg.cap, false);

    MmotSolution sol = solve_mmot(make_mmot_problem(cfg.mu, cfg.n_bodies, strict));
    require(sol.status == SolveStatus::optimal, "sweep: transport problem infeasible");

    SweepResult out;
    out.v_sce = sol.value;
    out.lp_plan = canonical_symmetrized(sol);
    out.lp_moments = plan_moments(out.lp_plan);

    const std::size_t pairs = std::max(ne, nbeta);
    for (double alpha : cfg.alphas) {
        OptimizerConfig oc = cfg.optimizer;
        MinimizeResult mr = minimize_bosonic(cfg.mu, cfg.n_bodies, alpha, capped, oc);
        SweepRecord rec;
        rec.alpha = alpha;
        rec.v_sce = out.v_sce;
        rec.f_alpha_upper = mr.value;
        rec.source = "descent";
        TransportPlan best_plan =
            make_plan(grid, cfg.n_bodies, wf_position_density(mr.psi), true, true);
        for (std::size_t k = 0; k < pairs; ++k) {
            const double eps = cfg.epsilon_schedule.empty()
                                   ? 1e-9
                                   : cfg.epsilon_schedule[ne == 1 ? 0 : k];
            const double beta =
                cfg.beta_schedule.empty() ? 1e-9 : cfg.beta_schedule[nbeta == 1 ? 0 : k];
            TransportPlan rec_plan = recovery_plan(out.lp_plan, cfg.mu, eps, beta);
            Wavefunction psi = wf_from_plan_sqrt(rec_plan);
            const double val = bosonic_energy(psi, alpha, capped);
            if (val < rec.f_alpha_upper) {
                rec.f_alpha_upper = val;
                {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "recovery(eps=%g,beta=%g)", eps, beta);
                    rec.source = buf;
                }
                best_plan = rec_plan;
            }
        }
        require(rec.f_alpha_upper >= out.v_sce - 1e-9, "sweep: upper bound fell below V_sce");
        rec.gap = rec.f_alpha_upper - out.v_sce;
        rec.moments = plan_moments(best_plan);
        out.records.push_back(std::move(rec));
    }

    const auto& last = out.records.back();
    double dev = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double scale = std::max(std::abs(out.lp_moments[i]), 1e-12);
        dev = std::max(dev, std::abs(last.moments[i] - out.lp_moments[i]) / scale);
    }
    out.final_moment_deviation = dev;
    out.minimizer_mismatch = dev > cfg.moment_tolerance;
    return out;
}

}  // namespace sce
