#pragma once

#include <utility>

#include "scelab/plan.hpp"

namespace sce {

// Two-body coupling with row marginal mu_B and column marginal mu_A:
// a diagonal part f = min(mu_A, mu_B) plus the rank-one part
// f_B (x) f_A(x') / int f_B.  The discrete diagonal carries weight 1/w(x) so
// both quadrature marginals are exact.
struct CouplingKernel {
    Grid1D grid;
    std::vector<double> f, f_A, f_B;
    double mass_fB = 0.0;
};

CouplingKernel build_coupling(const MarginalDensity& mu_A, const MarginalDensity& mu_B);
// Full kernel as an n x n matrix (row index x, column index x').
std::vector<double> coupling_matrix(const CouplingKernel& k);
// One-body transition matrix Q(i,j) = kernel(i,j) w_j / mu_A(j); applying Q
// along every axis of a plan with marginals mu_A yields marginals mu_B.
std::vector<double> transition_matrix(const CouplingKernel& k, const std::vector<double>& mu_A);

// Marginal-reinstating projection: every one-body marginal of the result is
// mu_B; symmetry and nonnegativity are preserved.
TransportPlan project(const TransportPlan& plan_A, const MarginalDensity& mu_B);
// Same operator through the 2^N multi-index expansion (diagonal/rank-one
// split per axis); used as an independent route in tests.
TransportPlan project_via_expansion(const TransportPlan& plan_A, const MarginalDensity& mu_B);

// (lhs, rhs) with lhs = ||gamma - P gamma||_1 and
// rhs = (2^(N-1) + (N-1)/2) ||mu_A - mu_B||_1.
std::pair<double, double> l1_stability_check(const TransportPlan& plan_A,
                                             const MarginalDensity& mu_B);

// Tensor-product mollification; mass, symmetry and marginal structure are
// preserved exactly by the column-renormalized smoothing matrix.
TransportPlan smooth(const TransportPlan& p, const MollifierKernel& k);
std::vector<double> smooth_density(const Grid1D& g, const std::vector<double>& values,
                                   const MollifierKernel& k);

// Mix in the partial mean-field plan:
// (1-beta) gamma + (beta/N) sum_i M1(x_i) M_{N-1}(rest).
TransportPlan strong_positivize(const TransportPlan& p, double beta);

struct StrongPositivity {
    bool holds = false;
    double best_beta = 0.0;
};
StrongPositivity is_strongly_positive(const TransportPlan& p);

inline double coulomb_stability_constant() {
    return 6.0 * std::cbrt(8.0 * kPi / 3.0);
}

// (lhs, rhs) with lhs = Vee(P gamma), rhs = Vee(gamma) + c* C(N,2) ||mu_A - mu_B||_{L1 cap L3}.
std::pair<double, double> coulomb_stability_check(const TransportPlan& plan_A,
                                                  const MarginalDensity& mu_B,
                                                  const CostMatrix& cost);

// smooth -> strong_positivize -> project back to the target marginal.
TransportPlan recovery_plan(const TransportPlan& gamma, const MarginalDensity& mu_target,
                            double epsilon, double beta);

}  // namespace sce
