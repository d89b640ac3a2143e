#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "scelab/fermionize.hpp"
#include "scelab/harriman.hpp"

using namespace sce;

namespace {

MarginalDensity linear_density(const Grid1D& g, int bodies) {
    std::vector<double> v(g.n);
    for (int i = 0; i < g.n; ++i) v[i] = 2.0 * g.nodes[i];
    return make_marginal(g, v, bodies, true);
}

}  // namespace

TEST_CASE("standard map") {
    Grid1D g = make_grid(0.0, 1.0, 401);
    MonotoneMap uni = standard_map(uniform_marginal(g, 2));
    for (int i = 0; i < g.n; ++i) CHECK(uni.F[i] == doctest::Approx(g.nodes[i]).epsilon(1e-12));

    MonotoneMap lin = standard_map(linear_density(g, 2));
    for (int i = 0; i < g.n; ++i)
        CHECK(lin.F[i] == doctest::Approx(g.nodes[i] * g.nodes[i]).epsilon(1e-4));
    CHECK(map_inverse(lin, 0.25) == doctest::Approx(0.5).epsilon(1e-3));

    // two-bump density: F flat in the gap, the inverse jumps across it
    std::vector<double> bumps(g.n, 1e-12);
    for (int i = 0; i < g.n; ++i) {
        if (g.nodes[i] < 0.3) bumps[i] = 1.0;
        if (g.nodes[i] > 0.7) bumps[i] = 1.0;
    }
    MonotoneMap bm = standard_map(make_marginal(g, bumps, 2, true));
    int i03 = 140, i07 = 260;  // inside the gap
    CHECK(bm.F[i07] - bm.F[i03] <= 1e-9);
    const double mid_mass = bm.F[i03];
    CHECK(map_inverse(bm, mid_mass - 1e-4) < 0.32);
    CHECK(map_inverse(bm, mid_mass + 1e-4) > 0.68);
}

TEST_CASE("pushforward") {
    Grid1D g = make_grid(0.0, 1.0, 401);
    MonotoneMap id = standard_map(uniform_marginal(g, 2));
    auto f = [](double t) { return std::complex<double>(t * t - t, 0.2 * t); };
    std::vector<std::complex<double>> pf = pushforward(f, id);
    for (int i = 0; i < g.n; ++i)
        CHECK(std::abs(pf[i] - f(g.nodes[i])) <= 1e-12);

    // constants push to constants under any map
    MonotoneMap lin = standard_map(linear_density(g, 2));
    std::vector<std::complex<double>> one =
        pushforward([](double) { return std::complex<double>(1.0, 0.0); }, lin);
    for (const auto& z : one) CHECK(std::abs(z - 1.0) <= 1e-15);

    // substitution oracle for v = 2y: int f(y^2) g(y^2) 2y dy = int f g dt
    Grid1D gf = make_grid(0.0, 1.0, 4001);
    MarginalDensity vf = linear_density(gf, 2);
    MonotoneMap mf = standard_map(vf);
    auto fa = [](double t) { return std::complex<double>(std::sin(2.0 * kPi * t), 0.0); };
    auto fb = [](double t) { return std::complex<double>(t, 0.0); };
    std::vector<std::complex<double>> pa = pushforward(fa, mf), pb = pushforward(fb, mf);
    std::complex<double> lhs = 0.0;
    for (int i = 0; i < gf.n; ++i)
        lhs += gf.weights[i] * vf.values[i] * std::conj(pa[i]) * pb[i];
    std::complex<double> rhs = 0.0;
    for (int i = 0; i < gf.n; ++i)
        rhs += gf.weights[i] * std::conj(fa(gf.nodes[i])) * fb(gf.nodes[i]);
    CHECK(std::abs(lhs - rhs) <= 1e-6);
}

TEST_CASE("lift unitarity") {
    Grid1D g = make_grid(0.0, 1.0, 4001);
    MarginalDensity v = linear_density(g, 2);

    // f = 1 lifts to sqrt(v)
    std::vector<std::complex<double>> l1 =
        lift([](double) { return std::complex<double>(1.0, 0.0); }, v);
    for (int i = 0; i < g.n; ++i)
        CHECK(std::abs(l1[i] - std::sqrt(v.values[i])) <= 1e-14);

    // uniform target: lift is the identity
    MarginalDensity uni = uniform_marginal(g, 2);
    auto f = [](double t) { return std::exp(std::complex<double>(0.0, 2.0 * kPi * t)); };
    std::vector<std::complex<double>> lu = lift(f, uni);
    for (int i = 0; i < g.n; i += 100)
        CHECK(std::abs(lu[i] - f(g.nodes[i])) <= 1e-10);

    // norm preserved for the oscillatory profile on v = 2y
    std::vector<std::complex<double>> lf = lift(f, v);
    std::complex<double> n2 = 0.0;
    for (int i = 0; i < g.n; ++i) n2 += g.weights[i] * std::conj(lf[i]) * lf[i];
    CHECK(std::abs(n2 - 1.0) <= 1e-6);
}

TEST_CASE("orbital families: orthonormality and pointwise density") {
    Grid1D g = make_grid(0.0, 1.0, 401);
    for (int n_orb : {1, 2, 3, 4, 5}) {
        for (OrbitalKind kind : {OrbitalKind::complex_exp, OrbitalKind::real_trig}) {
            for (bool linear : {false, true}) {
                MarginalDensity mu = linear ? linear_density(g, n_orb) : uniform_marginal(g, n_orb);
                OrbitalSet os = harriman_orbitals(mu, kind);
                REQUIRE(os.count == n_orb);
                for (int a = 0; a < n_orb; ++a)
                    for (int b = 0; b < n_orb; ++b) {
                        const double target = (a == b) ? 1.0 : 0.0;
                        CHECK(std::abs(orbital_inner_product(os, a, b) - target) <= 1e-8);
                    }
                for (int i = 0; i < g.n; ++i) {
                    double sum = 0.0;
                    for (int k = 0; k < n_orb; ++k) sum += std::norm(os.values[k][i]);
                    CHECK(std::abs(sum - n_orb * mu.values[i]) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("substitution inner product consistent with plain quadrature") {
    Grid1D g = make_grid(0.0, 1.0, 401);
    for (bool linear : {false, true}) {
        MarginalDensity mu = linear ? linear_density(g, 3) : uniform_marginal(g, 3);
        OrbitalSet os = harriman_orbitals(mu, OrbitalKind::complex_exp);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                CHECK(std::abs(orbital_inner_product(os, a, b) -
                               orbital_inner_product_quadrature(os, a, b)) <= 1e-3);
    }
}

TEST_CASE("uniform complex orbitals are plane waves") {
    Grid1D g = make_grid(0.0, 1.0, 401);
    OrbitalSet os = harriman_orbitals(uniform_marginal(g, 3), OrbitalKind::complex_exp);
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < g.n; i += 50) {
            const std::complex<double> expect =
                std::exp(std::complex<double>(0.0, 2.0 * kPi * (k + 1) * g.nodes[i]));
            CHECK(std::abs(os.values[k][i] - expect) <= 1e-10);
        }
}

TEST_CASE("orthonormality for v = 2y by analytic substitution") {
    // int_0^1 2y exp(2 pi i (k-l) y^2) dy = delta_kl after t = y^2
    Grid1D g = make_grid(0.0, 1.0, 401);
    OrbitalSet os = harriman_orbitals(linear_density(g, 2), OrbitalKind::complex_exp);
    CHECK(std::abs(orbital_inner_product(os, 0, 1)) <= 1e-12);
    CHECK(std::abs(orbital_inner_product(os, 0, 0) - 1.0) <= 1e-12);
}

TEST_CASE("regularity report") {
    Grid1D g = make_grid(0.0, 1.0, 401);

    MarginalDensity uni = uniform_marginal(g, 1);
    RegularityReport ru = regularity_check(harriman_orbitals(uni, OrbitalKind::complex_exp));
    CHECK(ru.gradient_formula_error < 1e-3);
    CHECK(ru.m1v_bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::isfinite(ru.kinetic[0]));

    MarginalDensity lin = linear_density(g, 1);
    RegularityReport rl = regularity_check(harriman_orbitals(lin, OrbitalKind::complex_exp));
    CHECK(rl.gradient_formula_error < 1e-2);
    CHECK(rl.m1v_bound == doctest::Approx(2.0).epsilon(1e-2));
}

TEST_CASE("determinant of a real orbital set represents the density") {
    Grid1D g = make_grid(0.0, 1.0, 33);
    MarginalDensity mu = uniform_marginal(g, 3);
    OrbitalSet os = harriman_orbitals(mu, OrbitalKind::real_trig);
    std::vector<SpinOrbital> orbs(3);
    for (int k = 0; k < 3; ++k) {
        orbs[k].up.assign(os.values[k].begin(), os.values[k].end());
        orbs[k].dn.assign(g.n, 0.0);
    }
    Wavefunction det = slater_determinant(g, orbs);
    // real-valued and antisymmetric by construction
    for (const auto& b : det.blocks)
        for (const auto& z : b.v) CHECK(std::abs(z.imag()) <= 1e-14);
    DTensor dens = wf_position_density(det);
    DTensor m1 = kern::contract_axis(kern::contract_axis(dens, g.weights, 2), g.weights, 1);
    for (int i = 0; i < g.n; ++i)
        CHECK(3.0 * m1.v[i] == doctest::Approx(3.0 * mu.values[i]).epsilon(1e-8));
}
