#include "scelab/plan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sce {

MarginalDensity make_marginal(const Grid1D& g, std::vector<double> values, int particle_count,
                              bool renormalize) {
    require(static_cast<int>(values.size()) == g.n, "marginal: length mismatch");
    require(particle_count >= 1, "marginal: particle_count must be positive");
    for (double x : values) require(x >= 0.0, "marginal: negative density value");
    double mass = 0.0;
    for (int i = 0; i < g.n; ++i) mass += g.weights[i] * values[i];
    if (renormalize) {
        require(mass > 0.0, "marginal: zero mass");
        for (double& x : values) x /= mass;
    } else {
        require(std::abs(mass - 1.0) <= 1e-12, "marginal: quadrature mass must be 1");
    }
    return MarginalDensity{g, particle_count, std::move(values)};
}

MarginalDensity uniform_marginal(const Grid1D& g, int particle_count) {
    double total = 0.0;
    for (double w : g.weights) total += w;
    return MarginalDensity{g, particle_count, std::vector<double>(g.n, 1.0 / total)};
}

TransportPlan make_plan(const Grid1D& g, int n_bodies, DTensor values, bool symmetric,
                        bool renormalize) {
    require(n_bodies >= 2 && n_bodies <= 3, "plan: N must be 2 or 3 at desk scale");
    require(g.n <= 65, "plan: n must be at most 65 at desk scale");
    require(values.n == g.n && values.axes == n_bodies, "plan: tensor shape mismatch");
    for (double& x : values.v) {
        require(x >= -1e-13, "plan: negative value");
        if (x < 0.0) x = 0.0;
    }
    TransportPlan p{g, n_bodies, symmetric, std::move(values)};
    const double mass = plan_mass(p);
    if (renormalize) {
        require(mass > 0.0, "plan: zero mass");
        for (double& x : p.values.v) x /= mass;
    } else {
        require(std::abs(mass - 1.0) <= 1e-12,
                "plan: quadrature mass must be 1 (got " + std::to_string(mass) + ")");
    }
    return p;
}

double plan_mass(const TransportPlan& p) {
    return kern::weighted_sum(p.values, p.grid.weights);
}

TransportPlan product_plan(const MarginalDensity& mu, int n_bodies) {
    DTensor t(mu.grid.n, n_bodies);
    MultiIndex mi(mu.grid.n, n_bodies);
    std::size_t f = 0;
    do {
        double v = 1.0;
        for (int k = 0; k < n_bodies; ++k) v *= mu.values[mi.idx[k]];
        t.v[f++] = v;
    } while (mi.advance());
    return make_plan(mu.grid, n_bodies, std::move(t), true, true);
}

Wavefunction make_wavefunction(const Grid1D& g, int n_bodies, bool spinful) {
    Wavefunction w;
    w.grid = g;
    w.n_bodies = n_bodies;
    w.spinful = spinful;
    w.blocks.assign(spinful ? (1u << n_bodies) : 1u, CTensor(g.n, n_bodies));
    return w;
}

double wf_norm2(const Wavefunction& w) {
    double s = 0.0;
    for (const auto& b : w.blocks) s += kern::weighted_norm2(b, w.grid.weights);
    return s;
}

void wf_normalize(Wavefunction& w) {
    const double nrm = std::sqrt(wf_norm2(w));
    require(nrm > 0.0, "wavefunction: zero norm");
    for (auto& b : w.blocks)
        for (auto& z : b.v) z /= nrm;
}

DTensor wf_position_density(const Wavefunction& w) {
    DTensor d(w.grid.n, w.n_bodies);
    for (const auto& b : w.blocks)
        for (std::size_t i = 0; i < d.size(); ++i) d.v[i] += std::norm(b.v[i]);
    return d;
}

Wavefunction wf_from_plan_sqrt(const TransportPlan& p) {
    Wavefunction w = make_wavefunction(p.grid, p.n_bodies, false);
    for (std::size_t i = 0; i < p.values.size(); ++i)
        w.blocks[0].v[i] = std::sqrt(std::max(0.0, p.values.v[i]));
    return w;
}

CostMatrix coulomb_cost(const Grid1D& g, double cap, bool strict_diagonal) {
    CostMatrix c;
    c.grid = g;
    c.cap = (cap > 0.0) ? cap : 10.0 / g.h;
    c.strict_diagonal = strict_diagonal;
    c.values.assign(static_cast<std::size_t>(g.n) * g.n, 0.0);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            c.values[static_cast<std::size_t>(i) * g.n + j] =
                (i == j) ? c.cap : 1.0 / std::abs(g.nodes[i] - g.nodes[j]);
    return c;
}

DTensor marginal_k(const TransportPlan& p, int k) {
    require(k >= 1 && k <= p.n_bodies - 1, "marginal_k: k out of range");
    DTensor t = p.values;
    for (int axis = p.n_bodies - 1; axis >= k; --axis)
        t = kern::contract_axis(t, p.grid.weights, axis);
    return t;
}

std::vector<double> one_body_marginal(const TransportPlan& p, int axis) {
    DTensor t = p.values;
    for (int a = p.n_bodies - 1; a >= 0; --a) {
        if (a == axis) continue;
        t = kern::contract_axis(t, p.grid.weights, a);
    }
    return t.v;
}

DTensor marginal_without_axis(const TransportPlan& p, int axis) {
    return kern::contract_axis(p.values, p.grid.weights, axis);
}

double coulomb_energy_tensor(const DTensor& gamma, const Grid1D& g, const CostMatrix& c) {
    if (c.strict_diagonal) {
        // mass sitting on any coincidence hyperplane costs infinity
        MultiIndex mi(gamma.n, gamma.axes);
        std::size_t f = 0;
        do {
            bool diag = false;
            for (int a = 0; a < gamma.axes && !diag; ++a)
                for (int b = a + 1; b < gamma.axes; ++b)
                    if (mi.idx[a] == mi.idx[b]) { diag = true; break; }
            if (diag && gamma.v[f] * tuple_weight(g.weights, gamma.axes, mi.idx.data()) > 1e-15)
                return std::numeric_limits<double>::infinity();
            ++f;
        } while (mi.advance());
    }
    return kern::pair_cost_sum(gamma, c.values, g.weights);
}

double coulomb_energy(const TransportPlan& p, const CostMatrix& c) {
    require(p.grid.n == c.grid.n, "coulomb_energy: grid mismatch");
    return coulomb_energy_tensor(p.values, p.grid, c);
}

double kinetic_energy(const Wavefunction& w) {
    const std::vector<double> d = gradient_matrix(w.grid);
    double t = 0.0;
    for (const auto& b : w.blocks)
        for (int axis = 0; axis < w.n_bodies; ++axis) {
            CTensor g = kern::apply_axis(b, d, axis);
            t += kern::weighted_norm2(g, w.grid.weights);
        }
    return t;
}

std::pair<double, double> hoffmann_ostenhof_check(const Wavefunction& w) {
    DTensor dens = wf_position_density(w);
    // first marginal of the position density
    DTensor m = dens;
    for (int axis = w.n_bodies - 1; axis >= 1; --axis)
        m = kern::contract_axis(m, w.grid.weights, axis);
    std::vector<double> sqrt_mu(w.grid.n);
    for (int i = 0; i < w.grid.n; ++i) sqrt_mu[i] = std::sqrt(std::max(0.0, m.v[i]));
    std::vector<double> g = gradient_fd(w.grid, sqrt_mu);
    double lhs = 0.0;
    for (int i = 0; i < w.grid.n; ++i) lhs += w.grid.weights[i] * g[i] * g[i];

    const std::vector<double> d = gradient_matrix(w.grid);
    double rhs = 0.0;
    for (const auto& b : w.blocks) {
        CTensor gb = kern::apply_axis(b, d, 0);
        rhs += kern::weighted_norm2(gb, w.grid.weights);
    }
    return {lhs, rhs};
}

double l1_norm(const Grid1D& g, const std::vector<double>& values) {
    double s = 0.0;
    for (int i = 0; i < g.n; ++i) s += g.weights[i] * std::abs(values[i]);
    return s;
}

double l1_l3_norm(const Grid1D& g, const std::vector<double>& values) {
    double l1 = 0.0, l3 = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double a = std::abs(values[i]);
        l1 += g.weights[i] * a;
        l3 += g.weights[i] * a * a * a;
    }
    return std::max(l1, std::cbrt(l3));
}

static void all_permutations(int n, std::vector<std::vector<int>>& out, std::vector<int>& cur,
                             std::vector<bool>& used) {
    if (static_cast<int>(cur.size()) == n) {
        out.push_back(cur);
        return;
    }
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        used[i] = true;
        cur.push_back(i);
        all_permutations(n, out, cur, used);
        cur.pop_back();
        used[i] = false;
    }
}

static std::vector<std::vector<int>> permutations(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::vector<bool> used(n, false);
    all_permutations(n, out, cur, used);
    return out;
}

static int perm_sign(const std::vector<int>& p) {
    int sign = 1;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) sign = -sign;
    return sign;
}

TransportPlan symmetrize(const TransportPlan& p) {
    const auto perms = permutations(p.n_bodies);
    DTensor acc(p.grid.n, p.n_bodies);
    for (const auto& perm : perms) {
        DTensor t = permute_axes(p.values, perm);
        for (std::size_t i = 0; i < acc.size(); ++i) acc.v[i] += t.v[i];
    }
    for (double& x : acc.v) x /= static_cast<double>(perms.size());
    return make_plan(p.grid, p.n_bodies, std::move(acc), true, true);
}

Wavefunction symmetrize(const Wavefunction& w, bool antisymmetric) {
    const auto perms = permutations(w.n_bodies);
    Wavefunction out = make_wavefunction(w.grid, w.n_bodies, w.spinful);
    for (const auto& perm : perms) {
        const double sgn = antisymmetric ? perm_sign(perm) : 1.0;
        for (int blk = 0; blk < w.block_count(); ++blk) {
            // spin labels permute together with positions
            int src_blk = 0;
            if (w.spinful)
                for (int k = 0; k < w.n_bodies; ++k)
                    if (blk & (1 << perm[k])) src_blk |= (1 << k);
            CTensor t = permute_axes(w.blocks[w.spinful ? src_blk : 0], perm);
            CTensor& dst = out.blocks[w.spinful ? blk : 0];
            for (std::size_t i = 0; i < t.size(); ++i) dst.v[i] += sgn * t.v[i];
            if (!w.spinful) break;
        }
    }
    for (auto& b : out.blocks)
        for (auto& z : b.v) z /= static_cast<double>(perms.size());
    const double n2 = wf_norm2(out);
    if (n2 <= 1e-24) throw DegenerateInput("symmetrize: signed average vanishes");
    wf_normalize(out);
    return out;
}

void validate_plan(const TransportPlan& p, double tol) {
    for (double x : p.values.v) require(x >= -tol, "plan: negative entry");
    require(std::abs(plan_mass(p) - 1.0) <= std::max(tol, 1e-12), "plan: mass not 1");
}

}  // namespace sce
