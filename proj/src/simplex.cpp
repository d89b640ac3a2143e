#include "scelab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sce {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;

struct Tableau {
    int m = 0;
    std::vector<double> binv;   // m x m, row-major
    std::vector<int> basis;     // column id per row; -1-r encodes artificial of row r
    std::vector<double> xb;     // basic values

    double& bi(int r, int c) { return binv[static_cast<std::size_t>(r) * m + c]; }
    const double& bi(int r, int c) const { return binv[static_cast<std::size_t>(r) * m + c]; }
};

// B^-1 * a_j for a sparse column
std::vector<double> ftran(const Tableau& t, const LpColumn& col) {
    std::vector<double> d(t.m, 0.0);
    for (const auto& [r, v] : col.entries)
        for (int i = 0; i < t.m; ++i) d[i] += t.bi(i, r) * v;
    return d;
}

void pivot(Tableau& t, int leave_row, int enter_col_id, const std::vector<double>& d) {
    const double piv = d[leave_row];
    const double step = t.xb[leave_row] / piv;
    for (int i = 0; i < t.m; ++i) {
        if (i == leave_row) continue;
        t.xb[i] -= d[i] * step;
        if (t.xb[i] < 0.0 && t.xb[i] > -1e-12) t.xb[i] = 0.0;
    }
    t.xb[leave_row] = step;
    const double inv = 1.0 / piv;
    for (int c = 0; c < t.m; ++c) t.bi(leave_row, c) *= inv;
    for (int i = 0; i < t.m; ++i) {
        if (i == leave_row) continue;
        const double f = d[i];
        if (f == 0.0) continue;
        for (int c = 0; c < t.m; ++c) t.bi(i, c) -= f * t.bi(leave_row, c);
    }
    t.basis[leave_row] = enter_col_id;
}

// One simplex phase.  Artificial columns never enter; zero-level artificials
// in the basis may leave on a zero-step pivot of either sign, which keeps
// redundant rows pinned at zero.  Returns true when phase-optimal.
bool run_phase(Tableau& t, const std::vector<LpColumn>& cols, const std::vector<double>& cost,
               double art_cost, int max_iterations, int& iters) {
    const int ncols = static_cast<int>(cols.size());
    int degenerate_streak = 0;
    bool bland = false;
    while (iters < max_iterations) {
        ++iters;
        // y = c_B B^-1
        std::vector<double> y(t.m, 0.0);
        for (int i = 0; i < t.m; ++i) {
            const double cb = (t.basis[i] < 0) ? art_cost : cost[t.basis[i]];
            if (cb == 0.0) continue;
            for (int c = 0; c < t.m; ++c) y[c] += cb * t.bi(i, c);
        }
        int enter = -1;
        double best = -kCostTol;
        for (int j = 0; j < ncols; ++j) {
            double rc = cost[j];
            for (const auto& [r, v] : cols[j].entries) rc -= y[r] * v;
            if (bland) {
                if (rc < -kCostTol) { enter = j; break; }
            } else if (rc < best - 1e-15) {
                best = rc;
                enter = j;
            }
        }
        if (enter < 0) return true;  // optimal
        const std::vector<double> d = ftran(t, cols[enter]);
        int leave = -1;
        double min_ratio = std::numeric_limits<double>::infinity();
        auto tie_key = [&](int r) {
            return std::pair<int, int>(t.basis[r] < 0 ? 0 : 1, t.basis[r]);
        };
        for (int i = 0; i < t.m; ++i) {
            const bool art = t.basis[i] < 0;
            const bool candidate = d[i] > kPivotTol ||
                                   (art && t.xb[i] <= 1e-12 && std::abs(d[i]) > kPivotTol);
            if (!candidate) continue;
            const double ratio = (d[i] > kPivotTol) ? t.xb[i] / d[i] : 0.0;
            if (ratio < min_ratio - 1e-12) {
                min_ratio = ratio;
                leave = i;
            } else if (ratio < min_ratio + 1e-12) {
                if (ratio < min_ratio) min_ratio = ratio;
                if (leave < 0 || tie_key(i) < tie_key(leave)) leave = i;
            }
        }
        if (leave < 0) return true;  // unbounded direction; cannot happen on transport polytopes
        if (min_ratio <= 1e-13) {
            if (++degenerate_streak > 6 * t.m) bland = true;
        } else {
            degenerate_streak = 0;
            bland = false;
        }
        pivot(t, leave, enter, d);
    }
    return false;
}

}  // namespace

LpResult solve_lp(int rows, const std::vector<double>& b, const std::vector<double>& cost,
                  const std::vector<LpColumn>& cols, int max_iterations) {
    Tableau t;
    t.m = rows;
    t.binv.assign(static_cast<std::size_t>(rows) * rows, 0.0);
    t.basis.resize(rows);
    t.xb.resize(rows);
    for (int i = 0; i < rows; ++i) {
        require(b[i] >= -1e-12, "lp: negative right-hand side");
        t.bi(i, i) = 1.0;
        t.basis[i] = -1 - i;
        t.xb[i] = std::max(0.0, b[i]);
    }
    LpResult res;
    int iters = 0;

    // phase 1: minimize sum of artificials
    std::vector<double> zero_cost(cols.size(), 0.0);
    if (!run_phase(t, cols, zero_cost, 1.0, max_iterations, iters)) {
        res.status = LpStatus::iteration_limit;
        return res;
    }
    double art_sum = 0.0;
    for (int i = 0; i < rows; ++i)
        if (t.basis[i] < 0) art_sum += t.xb[i];
    if (art_sum > 1e-8) {
        res.status = LpStatus::infeasible;
        return res;
    }
    // drive zero-level artificials out where a real pivot exists
    for (int i = 0; i < rows; ++i) {
        if (t.basis[i] >= 0) continue;
        t.xb[i] = 0.0;
        for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
            bool in_basis = false;
            for (int r = 0; r < rows; ++r)
                if (t.basis[r] == j) in_basis = true;
            if (in_basis) continue;
            const std::vector<double> d = ftran(t, cols[j]);
            if (std::abs(d[i]) > 1e-7) {
                pivot(t, i, j, d);
                break;
            }
        }
    }

    // phase 2: remaining artificials mark redundant rows and stay pinned at
    // zero by the extended ratio test
    if (!run_phase(t, cols, cost, 0.0, max_iterations, iters)) {
        res.status = LpStatus::iteration_limit;
        return res;
    }

    res.x.assign(cols.size(), 0.0);
    double obj = 0.0;
    for (int i = 0; i < rows; ++i) {
        if (t.basis[i] < 0) {
            require(std::abs(t.xb[i]) <= 1e-8, "lp: artificial left positive");
            continue;
        }
        res.x[t.basis[i]] = std::max(0.0, t.xb[i]);
        obj += cost[t.basis[i]] * res.x[t.basis[i]];
    }
    res.objective = obj;
    res.status = LpStatus::optimal;
    return res;
}

}  // namespace sce
