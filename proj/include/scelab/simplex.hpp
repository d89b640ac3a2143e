#pragma once

#include <utility>
#include <vector>

#include "scelab/common.hpp"

namespace sce {

// Dense-basis revised simplex for  min c.x  s.t.  A x = b, x >= 0,
// with sparse columns given as (row, coefficient) lists.  Deterministic:
// Dantzig pricing with lowest-index tie-break, Bland's rule after long
// degenerate stalls.  Redundant rows are tolerated (artificials may stay in
// the basis at level zero).
struct LpColumn {
    std::vector<std::pair<int, double>> entries;
};

enum class LpStatus { optimal, infeasible, iteration_limit };

struct LpResult {
    LpStatus status = LpStatus::iteration_limit;
    double objective = 0.0;
    std::vector<double> x;  // one value per column
};

LpResult solve_lp(int rows, const std::vector<double>& b, const std::vector<double>& cost,
                  const std::vector<LpColumn>& cols, int max_iterations = 200000);

}  // namespace sce
