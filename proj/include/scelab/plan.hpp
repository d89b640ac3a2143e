#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "scelab/grid.hpp"
#include "scelab/tensor.hpp"

namespace sce {

// One-body probability density mu on the grid (quadrature mass 1); the
// physics-normalized density rho = particle_count * mu lives here too.
struct MarginalDensity {
    Grid1D grid;
    int particle_count = 1;
    std::vector<double> values;

    std::vector<double> rho() const {
        std::vector<double> r = values;
        for (double& x : r) x *= particle_count;
        return r;
    }
};

MarginalDensity make_marginal(const Grid1D& g, std::vector<double> values, int particle_count,
                              bool renormalize = false);
MarginalDensity uniform_marginal(const Grid1D& g, int particle_count);

// Nonnegative N-body density of total quadrature mass 1.
struct TransportPlan {
    Grid1D grid;
    int n_bodies = 2;
    bool symmetric = false;
    DTensor values;
};

TransportPlan make_plan(const Grid1D& g, int n_bodies, DTensor values, bool symmetric,
                        bool renormalize = false);
TransportPlan product_plan(const MarginalDensity& mu, int n_bodies);
double plan_mass(const TransportPlan& p);

// N-body amplitude; when spinful, one spatial block per spin configuration
// (bit k of the block index = spin of particle k, 1 meaning up).
struct Wavefunction {
    Grid1D grid;
    int n_bodies = 1;
    bool spinful = false;
    std::vector<CTensor> blocks;

    int block_count() const { return spinful ? (1 << n_bodies) : 1; }
};

Wavefunction make_wavefunction(const Grid1D& g, int n_bodies, bool spinful);
double wf_norm2(const Wavefunction& w);
void wf_normalize(Wavefunction& w);
// Sum over spins of |psi|^2, as an N-body tensor.
DTensor wf_position_density(const Wavefunction& w);
Wavefunction wf_from_plan_sqrt(const TransportPlan& p);  // spinless, real sqrt amplitude

// Pairwise cost c(x,y) = 1/|x-y| with a capped diagonal (default cap 10/h).
// In strict mode diagonal mass is treated as forbidden: energies of plans
// carrying diagonal mass report +infinity and LP columns are deleted.
struct CostMatrix {
    Grid1D grid;
    double cap = 0.0;
    bool strict_diagonal = false;
    std::vector<double> values;  // n x n row-major
};

CostMatrix coulomb_cost(const Grid1D& g, double cap = -1.0, bool strict_diagonal = false);

// k-body marginal: contract the last N-k axes against quadrature weights.
DTensor marginal_k(const TransportPlan& p, int k);
// one-body marginal along a chosen axis (axis 0 by default)
std::vector<double> one_body_marginal(const TransportPlan& p, int axis = 0);
// (N-1)-body marginal with the given axis removed
DTensor marginal_without_axis(const TransportPlan& p, int axis);

double coulomb_energy(const TransportPlan& p, const CostMatrix& c);
double coulomb_energy_tensor(const DTensor& gamma, const Grid1D& g, const CostMatrix& c);
double kinetic_energy(const Wavefunction& w);

// (lhs, rhs) with lhs = int |grad sqrt(mu_1)|^2 of the first marginal of the
// position density, rhs = int |grad_{x_1} psi|^2.
std::pair<double, double> hoffmann_ostenhof_check(const Wavefunction& w);

double l1_norm(const Grid1D& g, const std::vector<double>& values);
double l1_l3_norm(const Grid1D& g, const std::vector<double>& values);

TransportPlan symmetrize(const TransportPlan& p);
// antisymmetric=false averages, true signs the average; throws DegenerateInput
// when the signed average vanishes.
Wavefunction symmetrize(const Wavefunction& w, bool antisymmetric = false);

void validate_plan(const TransportPlan& p, double tol = 1e-12);

}  // namespace sce
