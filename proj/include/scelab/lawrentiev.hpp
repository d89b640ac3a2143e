#pragma once

#include <vector>

#include "scelab/grid.hpp"

namespace sce {

// Scalar path on [0,1] pinned to u(0) = 0, u(1) = 1.
struct PathFunction {
    Grid1D grid;
    std::vector<double> values;
};

PathFunction make_path(const Grid1D& g, std::vector<double> values);
// x^p sampled on a fresh n-node grid over [0,1]
PathFunction power_profile(int n, double p);

// J[u] = int (x - u^3)^2 u'^6, midpoint rule with midpoint slopes.
double mania_J(const PathFunction& u);
// T[u] = int u'^2, same discretization.
double kinetic_T(const PathFunction& u);
inline double perturbed_value(const PathFunction& u, double eps) {
    return mania_J(u) + eps * eps * kinetic_T(u);
}

struct PerturbedMin {
    PathFunction u;
    double value = 0.0;
    bool converged = false;
};

// Multi-start descent (linear ramp, x^{3/5}, x^{1/2}; callers may add
// starts).  Coordinate sweeps with bracketed line searches, plus a
// slope-sparsification proposal (flat/jump profiles) that is only accepted
// when it lowers the objective.
PerturbedMin minimize_perturbed(double eps, int n, int iterations,
                                const std::vector<std::vector<double>>& extra_starts = {});

// max over nodes of u(x) - sqrt(x) sqrt(T[u]); nonpositive by the discrete
// Cauchy-Schwarz inequality.
double csi_bound_check(const PathFunction& u);

struct GapCertificate {
    double x_star = 0.0;
    double g_value = 0.0;
    double bound = 0.0;
};

// Lower-bound chain: x_star is the first node where u crosses x^{1/3}/2,
// g_value = (7/8)^2 int_0^{x_star} x^2 u'^6, and
// bound = (7/8)^2 (3/10)^6 (5/3) / x_star.
GapCertificate gap_certificate(const PathFunction& u);

// Rebuilds the seven-component quadratic-constraint chain from u and returns
// |I[psi] - J[u]|.
double constraint_chain_check(const PathFunction& u);

}  // namespace sce
