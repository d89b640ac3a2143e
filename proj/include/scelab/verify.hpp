#pragma once

#include <string>
#include <vector>

#include "scelab/plan.hpp"

namespace sce {

struct CheckResult {
    std::string name;
    bool passed = false;
    bool required = true;  // report-only checks carry d=1 caveats
    std::string detail;
};

// Randomized fixtures with a deterministic stream.
MarginalDensity random_density(const Grid1D& g, Rng& rng, int particle_count = 2);
// Mixture of symmetrized product plans; all one-body marginals coincide by
// construction, independently of the projection machinery.
TransportPlan random_symmetric_plan(const Grid1D& g, int n_bodies, Rng& rng);

// Full invariant suite; quick mode shrinks grids and counts.
std::vector<CheckResult> run_verification(bool quick, std::uint64_t seed);

}  // namespace sce
