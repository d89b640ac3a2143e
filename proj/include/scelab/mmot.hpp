#pragma once

#include <vector>

#include "scelab/plan.hpp"

namespace sce {

// Multi-marginal transport with pairwise Coulomb cost: minimize the
// interaction energy over nonnegative N-body plans whose one-body marginals
// all equal mu.  Symmetry is not imposed; any minimizer symmetrizes at equal
// cost.
struct MmotProblem {
    MarginalDensity mu;
    int n_bodies = 2;
    CostMatrix cost;
};

enum class SolveStatus { optimal, infeasible };

struct MmotSolution {
    TransportPlan plan;
    double value = 0.0;
    SolveStatus status = SolveStatus::infeasible;
};

MmotProblem make_mmot_problem(const MarginalDensity& mu, int n_bodies, const CostMatrix& cost);

// Exact LP solve (deterministic revised simplex over tuple masses).
MmotSolution solve_mmot(const MmotProblem& p);

// Independent oracle, test use only: exhaustive enumeration of basic feasible
// solutions, or an exact unit-mass assignment solve for two-body problems
// with rational marginal masses.  Guards: n^N <= 4096 and a basis-count
// budget.
MmotSolution brute_force_mmot(const MmotProblem& p);

// Symmetrized copy of the solution plan (canonical representative; the cost
// is permutation invariant so the value is unchanged).
TransportPlan canonical_symmetrized(const MmotSolution& s);

struct MongeDiagnostic {
    bool monge_strict = false;
    bool monge_up_to_symmetrization = false;
    // maps[k][i] = node index of particle k+2 given particle 1 at node i,
    // or -1 where mu vanishes; filled when either flag is set.
    std::vector<std::vector<int>> maps;
};

// Reports whether each conditional slice of the plan concentrates at least
// `concentration` of its mass on a single target tuple (strict), or whether
// the plan is a symmetrized Monge plan (multiset cover search).
MongeDiagnostic monge_diagnostic(const MmotSolution& s, double concentration = 0.99);

}  // namespace sce
