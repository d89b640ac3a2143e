#include "scelab/mmot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "scelab/simplex.hpp"

namespace sce {

namespace {

bool tuple_on_diagonal(int axes, const int* idx) {
    for (int a = 0; a < axes; ++a)
        for (int b = a + 1; b < axes; ++b)
            if (idx[a] == idx[b]) return true;
    return false;
}

double tuple_cost(const CostMatrix& c, int axes, const int* idx) {
    double s = 0.0;
    const int n = c.grid.n;
    for (int a = 0; a < axes; ++a)
        for (int b = a + 1; b < axes; ++b) s += c.values[static_cast<std::size_t>(idx[a]) * n + idx[b]];
    return s;
}

struct ColumnSet {
    std::vector<std::size_t> flat;       // flat tuple index per column
    std::vector<LpColumn> cols;
    std::vector<double> cost;
};

ColumnSet build_columns(const MmotProblem& p) {
    const int n = p.mu.grid.n;
    const int nb = p.n_bodies;
    ColumnSet cs;
    MultiIndex mi(n, nb);
    std::size_t f = 0;
    do {
        if (!(p.cost.strict_diagonal && tuple_on_diagonal(nb, mi.idx.data()))) {
            cs.flat.push_back(f);
            LpColumn col;
            for (int k = 0; k < nb; ++k) col.entries.push_back({k * n + mi.idx[k], 1.0});
            cs.cols.push_back(std::move(col));
            cs.cost.push_back(tuple_cost(p.cost, nb, mi.idx.data()));
        }
        ++f;
    } while (mi.advance());
    return cs;
}

std::vector<double> node_masses(const MarginalDensity& mu) {
    std::vector<double> b(mu.grid.n);
    for (int i = 0; i < mu.grid.n; ++i) b[i] = mu.values[i] * mu.grid.weights[i];
    return b;
}

MmotSolution solution_from_masses(const MmotProblem& p, const ColumnSet& cs,
                                  const std::vector<double>& mass, double value) {
    const int n = p.mu.grid.n;
    DTensor gamma(n, p.n_bodies);
    for (std::size_t j = 0; j < cs.flat.size(); ++j) {
        if (mass[j] <= 0.0) continue;
        // decode tuple to divide by the quadrature weight product
        std::size_t f = cs.flat[j];
        double w = 1.0;
        for (int k = p.n_bodies - 1; k >= 0; --k) {
            w *= p.mu.grid.weights[f % n];
            f /= n;
        }
        gamma.v[cs.flat[j]] = mass[j] / w;
    }
    MmotSolution s;
    s.plan = make_plan(p.mu.grid, p.n_bodies, std::move(gamma), false, false);
    s.value = value;
    s.status = SolveStatus::optimal;
    // feasibility and value consistency of the reported plan
    for (int axis = 0; axis < p.n_bodies; ++axis) {
        std::vector<double> m = one_body_marginal(s.plan, axis);
        for (int i = 0; i < n; ++i)
            require(std::abs(m[i] - p.mu.values[i]) <= 1e-9, "mmot: infeasible plan returned");
    }
    const double energy = coulomb_energy(s.plan, p.cost);
    require(std::abs(energy - value) <= 1e-9 * std::max(1.0, std::abs(value)),
            "mmot: plan energy disagrees with the reported value");
    return s;
}

// exact min-cost perfect matching with potentials, O(K^3)
double hungarian(const std::vector<double>& a, int K, std::vector<int>& match) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(K + 1, 0.0), v(K + 1, 0.0);
    std::vector<int> p(K + 1, 0), way(K + 1, 0);
    for (int i = 1; i <= K; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(K + 1, inf);
        std::vector<char> used(K + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = -1;
            double delta = inf;
            for (int j = 1; j <= K; ++j) {
                if (used[j]) continue;
                const double cur = a[static_cast<std::size_t>(i0 - 1) * K + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= K; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    match.assign(K, -1);
    double cost = 0.0;
    for (int j = 1; j <= K; ++j) {
        if (p[j] == 0) continue;
        match[p[j] - 1] = j - 1;
        cost += a[static_cast<std::size_t>(p[j] - 1) * K + (j - 1)];
    }
    return cost;
}

double binomial_count(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) {
        r *= static_cast<double>(n - i) / (i + 1);
        if (r > 1e18) return r;
    }
    return r;
}

int matrix_rank(std::vector<std::vector<double>> a) {
    const int rows = static_cast<int>(a.size());
    if (rows == 0) return 0;
    const int cols = static_cast<int>(a[0].size());
    int rank = 0;
    for (int c = 0; c < cols && rank < rows; ++c) {
        int piv = -1;
        double best = 1e-9;
        for (int r = rank; r < rows; ++r)
            if (std::abs(a[r][c]) > best) {
                best = std::abs(a[r][c]);
                piv = r;
            }
        if (piv < 0) continue;
        std::swap(a[rank], a[piv]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || a[r][c] == 0.0) continue;
            const double f = a[r][c] / a[rank][c];
            for (int cc = c; cc < cols; ++cc) a[r][cc] -= f * a[rank][cc];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

MmotProblem make_mmot_problem(const MarginalDensity& mu, int n_bodies, const CostMatrix& cost) {
    require(n_bodies >= 2, "mmot: N must be at least 2");
    require(mu.grid.same_as(cost.grid), "mmot: grid mismatch");
    return MmotProblem{mu, n_bodies, cost};
}

MmotSolution solve_mmot(const MmotProblem& p) {
    const int n = p.mu.grid.n;
    double vars = 1.0;
    for (int k = 0; k < p.n_bodies; ++k) vars *= n;
    require(vars <= 1e6, "mmot: too many LP variables");

    ColumnSet cs = build_columns(p);
    const std::vector<double> bm = node_masses(p.mu);
    std::vector<double> b(static_cast<std::size_t>(p.n_bodies) * n);
    for (int k = 0; k < p.n_bodies; ++k)
        for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(k) * n + i] = bm[i];

    LpResult lp = solve_lp(p.n_bodies * n, b, cs.cost, cs.cols);
    MmotSolution s;
    if (lp.status == LpStatus::infeasible) {
        s.status = SolveStatus::infeasible;
        s.plan = TransportPlan{p.mu.grid, p.n_bodies, false, DTensor(n, p.n_bodies)};
        return s;
    }
    require(lp.status == LpStatus::optimal, "mmot: simplex did not converge");
    return solution_from_masses(p, cs, lp.x, lp.objective);
}

MmotSolution brute_force_mmot(const MmotProblem& p) {
    const int n = p.mu.grid.n;
    double vars = 1.0;
    for (int k = 0; k < p.n_bodies; ++k) vars *= n;
    require(vars <= 4096.0, "brute_force_mmot: size guard n^N <= 4096");

    ColumnSet cs = build_columns(p);
    const std::vector<double> bm = node_masses(p.mu);
    const int rows = p.n_bodies * n;

    // two-body problems with rational masses reduce to an exact unit-mass
    // assignment; this covers instances whose basis count is out of reach.
    // Irrational masses fall through to the vertex enumeration below.
    if (p.n_bodies == 2) {
        for (int K = 1; K <= 1024; ++K) {
            bool ok = true;
            long total = 0;
            std::vector<int> units(n);
            for (int i = 0; i < n && ok; ++i) {
                const double scaled = bm[i] * K;
                const long r = std::lround(scaled);
                if (std::abs(scaled - r) > 1e-9 * K) ok = false;
                units[i] = static_cast<int>(r);
                total += r;
            }
            if (!ok || total != K) continue;
            std::vector<int> unit_node;
            for (int i = 0; i < n; ++i)
                for (int u = 0; u < units[i]; ++u) unit_node.push_back(i);
            const double forbidden = 1e15;
            std::vector<double> a(static_cast<std::size_t>(K) * K);
            for (int r = 0; r < K; ++r)
                for (int c = 0; c < K; ++c) {
                    const int ni = unit_node[r], nj = unit_node[c];
                    double cost = p.cost.values[static_cast<std::size_t>(ni) * n + nj];
                    if (p.cost.strict_diagonal && ni == nj) cost = forbidden;
                    a[static_cast<std::size_t>(r) * K + c] = cost;
                }
            std::vector<int> match;
            const double total_cost = hungarian(a, K, match);
            if (total_cost >= forbidden) {
                MmotSolution s;
                s.status = SolveStatus::infeasible;
                s.plan = TransportPlan{p.mu.grid, 2, false, DTensor(n, 2)};
                return s;
            }
            std::vector<double> mass(cs.flat.size(), 0.0);
            std::map<std::size_t, double> cell_mass;
            for (int r = 0; r < K; ++r)
                cell_mass[static_cast<std::size_t>(unit_node[r]) * n + unit_node[match[r]]] += 1.0 / K;
            for (std::size_t j = 0; j < cs.flat.size(); ++j) {
                auto it = cell_mass.find(cs.flat[j]);
                if (it != cell_mass.end()) mass[j] = it->second;
            }
            return solution_from_masses(p, cs, mass, total_cost / K);
        }
    }

    // exhaustive vertex (basic feasible solution) enumeration
    std::vector<std::vector<double>> dense(rows, std::vector<double>(cs.cols.size(), 0.0));
    for (std::size_t j = 0; j < cs.cols.size(); ++j)
        for (const auto& [r, v] : cs.cols[j].entries) dense[r][j] = v;
    const int rank = matrix_rank(dense);
    const int ncols = static_cast<int>(cs.cols.size());
    if (ncols < rank) {
        MmotSolution s;  // fewer columns than constraint rank: no feasible point
        s.status = SolveStatus::infeasible;
        s.plan = TransportPlan{p.mu.grid, p.n_bodies, false, DTensor(n, p.n_bodies)};
        return s;
    }
    require(binomial_count(ncols, rank) <= 5e6,
            "brute_force_mmot: basis enumeration budget exceeded");

    std::vector<double> b(rows);
    for (int k = 0; k < p.n_bodies; ++k)
        for (int i = 0; i < n; ++i) b[static_cast<std::size_t>(k) * n + i] = bm[i];

    std::vector<int> pick(rank);
    for (int i = 0; i < rank; ++i) pick[i] = i;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> best_mass;
    bool found = false;
    std::vector<std::vector<double>> work(rows, std::vector<double>(rank + 1));
    while (true) {
        // solve A_S x = b by elimination; skip rank-deficient or inconsistent picks
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < rank; ++c) work[r][c] = dense[r][pick[c]];
            work[r][rank] = b[r];
        }
        int row = 0;
        std::vector<int> pivot_row(rank, -1);
        bool singular = false;
        for (int c = 0; c < rank && !singular; ++c) {
            int piv = -1;
            double bestp = 1e-9;
            for (int r = row; r < rows; ++r)
                if (std::abs(work[r][c]) > bestp) {
                    bestp = std::abs(work[r][c]);
                    piv = r;
                }
            if (piv < 0) {
                singular = true;
                break;
            }
            std::swap(work[row], work[piv]);
            for (int r = 0; r < rows; ++r) {
                if (r == row || work[r][c] == 0.0) continue;
                const double f = work[r][c] / work[row][c];
                for (int cc = c; cc <= rank; ++cc) work[r][cc] -= f * work[row][cc];
            }
            pivot_row[c] = row;
            ++row;
        }
        if (!singular) {
            bool consistent = true;
            for (int r = row; r < rows; ++r)
                if (std::abs(work[r][rank]) > 1e-9) consistent = false;
            if (consistent) {
                std::vector<double> x(rank);
                bool feasible = true;
                for (int c = 0; c < rank; ++c) {
                    x[c] = work[pivot_row[c]][rank] / work[pivot_row[c]][c];
                    if (x[c] < -1e-10) feasible = false;
                }
                if (feasible) {
                    double value = 0.0;
                    for (int c = 0; c < rank; ++c) value += cs.cost[pick[c]] * std::max(0.0, x[c]);
                    if (value < best_value - 1e-15) {
                        best_value = value;
                        best_mass.assign(cs.cols.size(), 0.0);
                        for (int c = 0; c < rank; ++c) best_mass[pick[c]] = std::max(0.0, x[c]);
                        found = true;
                    }
                }
            }
        }
        // next combination
        int k = rank - 1;
        while (k >= 0 && pick[k] == ncols - rank + k) --k;
        if (k < 0) break;
        ++pick[k];
        for (int j = k + 1; j < rank; ++j) pick[j] = pick[j - 1] + 1;
    }
    if (!found) {
        MmotSolution s;
        s.status = SolveStatus::infeasible;
        s.plan = TransportPlan{p.mu.grid, p.n_bodies, false, DTensor(n, p.n_bodies)};
        return s;
    }
    return solution_from_masses(p, cs, best_mass, best_value);
}

TransportPlan canonical_symmetrized(const MmotSolution& s) {
    require(s.status == SolveStatus::optimal, "canonical_symmetrized: no plan");
    return symmetrize(s.plan);
}

namespace {

struct MultisetMass {
    std::vector<int> sorted_tuple;
    double mass = 0.0;
};

// DFS exact cover: each node's full marginal mass feeds exactly one multiset
// containing it, and every multiset's mass must be fully accounted for.
bool cover_search(int node, const std::vector<int>& active_nodes,
                  const std::vector<double>& node_mass, std::vector<MultisetMass>& ms,
                  std::vector<double>& remaining, std::vector<int>& choice, long& steps,
                  double tol) {
    if (++steps > 2000000) return false;
    if (node == static_cast<int>(active_nodes.size())) {
        for (std::size_t k = 0; k < ms.size(); ++k)
            if (remaining[k] > tol * std::max(1.0, ms[k].mass)) return false;
        return true;
    }
    const int v = active_nodes[node];
    for (std::size_t k = 0; k < ms.size(); ++k) {
        bool contains = false;
        for (int x : ms[k].sorted_tuple)
            if (x == v) contains = true;
        if (!contains) continue;
        if (remaining[k] < node_mass[v] - tol * std::max(1.0, ms[k].mass)) continue;
        remaining[k] -= node_mass[v];
        choice[node] = static_cast<int>(k);
        if (cover_search(node + 1, active_nodes, node_mass, ms, remaining, choice, steps, tol))
            return true;
        remaining[k] += node_mass[v];
    }
    return false;
}

}  // namespace

MongeDiagnostic monge_diagnostic(const MmotSolution& s, double concentration) {
    require(s.status == SolveStatus::optimal, "monge_diagnostic: needs an optimal solution");
    const TransportPlan& p = s.plan;
    const int n = p.grid.n;
    const int nb = p.n_bodies;
    MongeDiagnostic d;

    // strict test: conditional slices of the first coordinate
    const std::vector<double> mu = one_body_marginal(p, 0);
    std::vector<std::vector<int>> strict_maps(nb - 1, std::vector<int>(n, -1));
    bool strict = true;
    const std::size_t slice = p.values.stride(0);
    for (int i = 0; i < n && strict; ++i) {
        if (mu[i] * p.grid.weights[i] <= 1e-13) continue;
        double total = 0.0, best = -1.0;
        std::size_t best_f = 0;
        MultiIndex mi(n, nb - 1);
        std::size_t f = 0;
        do {
            int idx[8];
            idx[0] = i;
            for (int k = 1; k < nb; ++k) idx[k] = mi.idx[k - 1];
            const double m = p.values.v[slice * i + f] * tuple_weight(p.grid.weights, nb, idx);
            total += m;
            if (m > best) {
                best = m;
                best_f = f;
            }
            ++f;
        } while (mi.advance());
        if (best < concentration * total) {
            strict = false;
            break;
        }
        std::size_t rem = best_f;
        for (int k = nb - 2; k >= 0; --k) {
            strict_maps[k][i] = static_cast<int>(rem % n);
            rem /= n;
        }
    }
    d.monge_strict = strict;

    // symmetrized test: aggregate to sorted tuples and search for an exact
    // cover by full node masses
    std::map<std::vector<int>, double> agg;
    {
        MultiIndex mi(n, nb);
        std::size_t f = 0;
        do {
            const double m =
                p.values.v[f] * tuple_weight(p.grid.weights, nb, mi.idx.data());
            if (m > 1e-13) {
                std::vector<int> key(mi.idx.begin(), mi.idx.begin() + nb);
                std::sort(key.begin(), key.end());
                agg[key] += m;
            }
            ++f;
        } while (mi.advance());
    }
    std::vector<MultisetMass> ms;
    for (const auto& [key, mass] : agg) ms.push_back({key, mass});
    std::vector<double> node_mass(n, 0.0);
    std::vector<int> active_nodes;
    for (int i = 0; i < n; ++i) {
        node_mass[i] = mu[i] * p.grid.weights[i];
        if (node_mass[i] > 1e-13) active_nodes.push_back(i);
    }
    std::vector<double> remaining;
    for (const auto& m : ms) remaining.push_back(m.mass);
    std::vector<int> choice(active_nodes.size(), -1);
    long steps = 0;
    const double tol = 1.0 - concentration;
    d.monge_up_to_symmetrization =
        !ms.empty() &&
        cover_search(0, active_nodes, node_mass, ms, remaining, choice, steps, tol);

    if (d.monge_strict) {
        d.maps = strict_maps;
    } else if (d.monge_up_to_symmetrization) {
        d.maps.assign(nb - 1, std::vector<int>(n, -1));
        for (std::size_t a = 0; a < active_nodes.size(); ++a) {
            const int v = active_nodes[a];
            std::vector<int> rest = ms[choice[a]].sorted_tuple;
            auto it = std::find(rest.begin(), rest.end(), v);
            rest.erase(it);
            for (int k = 0; k < nb - 1; ++k) d.maps[k][v] = rest[k];
        }
    }
    return d;
}

}  // namespace sce
