#pragma once

#include <array>
#include <string>
#include <vector>

#include "scelab/mmot.hpp"
#include "scelab/reinstate.hpp"

namespace sce {

double bosonic_energy(const Wavefunction& psi, double alpha, const CostMatrix& cost);

struct OptimizerConfig {
    int max_iterations = 600;
    double step = 0.05;
    double tolerance = 1e-11;
    const TransportPlan* warm_start = nullptr;  // default: product plan of mu
};

struct MinimizeResult {
    Wavefunction psi;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Projected descent on nonnegative amplitudes with feasibility restoration:
// each accepted step converts |psi|^2 to a plan and projects it back onto the
// marginal constraint, so every reported value is attained by a feasible
// trial state.
MinimizeResult minimize_bosonic(const MarginalDensity& mu, int n_bodies, double alpha,
                                const CostMatrix& cost, const OptimizerConfig& cfg = {});

// Energy of sqrt(recovery_plan(gamma_opt, mu, eps, beta)) at coupling alpha.
double recovery_upper_bound(const TransportPlan& gamma_opt, const MarginalDensity& mu,
                            double alpha, double epsilon, double beta, const CostMatrix& cost);

// Bounded continuous test functions used for the weak-convergence proxy:
// {1, mean(x), mean(x)^2, exp(-mean(x)), min(|x1-x2|,1)}.
std::array<double, 5> plan_moments(const TransportPlan& p);

struct SweepConfig {
    MarginalDensity mu;
    int n_bodies = 2;
    std::vector<double> alphas;            // strictly decreasing
    std::vector<double> epsilon_schedule;  // paired with beta_schedule (length 1 broadcasts)
    std::vector<double> beta_schedule;
    OptimizerConfig optimizer;
    double cap = -1.0;
    double moment_tolerance = 0.05;
};

struct SweepRecord {
    double alpha = 0.0;
    double f_alpha_upper = 0.0;
    double v_sce = 0.0;
    double gap = 0.0;
    std::array<double, 5> moments{};
    std::string source;  // which trial family achieved the upper bound
};

struct SweepResult {
    double v_sce = 0.0;
    std::vector<SweepRecord> records;
    std::array<double, 5> lp_moments{};
    TransportPlan lp_plan;  // canonical symmetrized minimizer
    bool minimizer_mismatch = false;
    double final_moment_deviation = 0.0;
};

SweepResult semiclassical_sweep(const SweepConfig& cfg);

}  // namespace sce
