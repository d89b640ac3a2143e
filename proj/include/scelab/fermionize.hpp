#pragma once

#include <utility>

#include "scelab/plan.hpp"

namespace sce {

// Scalar node profile: s odd Lipschitz with s^2 = 1 outside [-1,1], c the
// complementary factor with c^2 + s^2 = 1.
double node_s(double z);
double node_c(double z);

// A(x) = prod_{i<j} s((x_i - x_j)/delta) is antisymmetric, equals +-1 once
// all pair distances exceed delta; B = sqrt(1 - A^2) is its Lipschitz
// complement.
struct NodeFunctions {
    double delta = 0.0;
    Grid1D grid;
    int n_bodies = 2;
    DTensor A, B;
};

NodeFunctions make_node_functions(double delta, const Grid1D& g, int n_bodies);

struct NodeInsertion {
    Wavefunction psi_delta;  // spinful, all-spins-up block carries A * phi
    DTensor rho_N;           // N-body position density of psi_delta
};

// Multiplies a symmetric spinless amplitude by the antisymmetric node factor
// and the all-up spin product.
NodeInsertion insert_node(const Wavefunction& phi, const NodeFunctions& nf);

struct ExcessDensity {
    std::vector<double> rho_prime;  // one-body, physics normalization (mass -> N * deficit)
    Wavefunction phi_prime;         // B * phi, symmetric, sub-normalized
};

ExcessDensity excess_density(const Wavefunction& phi, const NodeFunctions& nf);

// Combines two real antisymmetric wavefunctions as psi + i * psi_prime, so
// densities and interaction energies add without interference.
Wavefunction match_wavefunctions(const Wavefunction& psi, const Wavefunction& psi_prime);

struct SpinOrbital {
    std::vector<std::complex<double>> up, dn;
};

// (direct - exchange, direct) for the Slater determinant of the orbitals;
// the first component equals the N-body interaction energy of the
// determinant, the second is the Hartree upper bound.
std::pair<double, double> slater_vee(const Grid1D& g, const std::vector<SpinOrbital>& orbitals,
                                     const CostMatrix& cost);

// Full determinant wavefunction (test-scale, N <= 3).
Wavefunction slater_determinant(const Grid1D& g, const std::vector<SpinOrbital>& orbitals);

struct BosFerRelation {
    double t_bosonic = 0.0;
    double t_fermionic = 0.0;
    bool vee_equal = false;
};

// Compares the kinetic energy of psi with that of the spin-summed bosonic
// amplitude sqrt(sum_s |psi|^2); interaction energies agree since both share
// the position density.
BosFerRelation bosonic_fermionic_relation(const Wavefunction& psi, const CostMatrix& cost);

// Explicit slope bound for B along one axis: (2^M - 1)(N-1) * pi/(2 delta)
// with M = C(N,2).
double node_b_slope_bound(int n_bodies, double delta);

}  // namespace sce
