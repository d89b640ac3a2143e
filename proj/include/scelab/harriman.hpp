#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "scelab/plan.hpp"

namespace sce {

// Monotone rearrangement data: F is the cumulative of a probability density v
// on the grid (F(a) = 0, F(b) = 1), and the transport map T = F^{-1} pushes
// Lebesgue measure on [0,1] forward to v.  Flats of F are resolved by the
// left-continuous generalized inverse.
struct MonotoneMap {
    Grid1D grid;
    std::vector<double> F;
};

MonotoneMap standard_map(const MarginalDensity& v);
double map_inverse(const MonotoneMap& m, double t);  // T(t)

// T_sharp f = f o F, sampled on the target grid.
std::vector<std::complex<double>> pushforward(
    const std::function<std::complex<double>(double)>& f, const MonotoneMap& m);

// Lf(y) = sqrt(v(y)) f(F(y)); unitary from L^2([0,1]) into L^2(dy).
std::vector<std::complex<double>> lift(const std::function<std::complex<double>(double)>& f,
                                       const MarginalDensity& v);

enum class OrbitalKind { complex_exp, real_trig };

// One orbital's profile on [0,1] as a finite list of integer-frequency
// harmonics phi(t) = sum coef * exp(2 pi i m t).
struct OrbitalSpec {
    std::vector<std::pair<std::complex<double>, int>> harmonics;
};

struct OrbitalSet {
    Grid1D grid;
    OrbitalKind kind = OrbitalKind::complex_exp;
    int count = 0;
    MarginalDensity mu;  // target one-body density / N, particle_count = N
    std::vector<double> F;
    std::vector<OrbitalSpec> specs;
    std::vector<std::vector<std::complex<double>>> values;  // count x n
};

// Orthonormal orbitals whose squared moduli sum pointwise to rho = N * mu.
OrbitalSet harriman_orbitals(const MarginalDensity& mu, OrbitalKind kind);

// Inner product <phi_a, phi_b> evaluated by the monotone substitution
// t = F(y): cellwise-exact for the trigonometric profiles, so orthonormality
// holds to machine precision independently of n.
std::complex<double> orbital_inner_product(const OrbitalSet& s, int a, int b);
// Plain trapezoid-quadrature inner product, for cross-checks.
std::complex<double> orbital_inner_product_quadrature(const OrbitalSet& s, int a, int b);

struct RegularityReport {
    double gradient_formula_error = 0.0;          // max over orbitals, interior nodes
    double m1v_bound = 0.0;                       // sup |M1 v|
    std::vector<double> per_orbital_error;
    std::vector<double> kinetic;                  // discrete |grad L phi|^2 per orbital
};

// Compares the product-rule gradient sqrt(v)' phi(F) + sqrt(v) phi'(F) v
// against finite differences of the sampled orbitals.
RegularityReport regularity_check(const OrbitalSet& s);

}  // namespace sce
