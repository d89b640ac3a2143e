#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "scelab/plan.hpp"
#include "scelab/verify.hpp"

using namespace sce;

TEST_CASE("one-body marginals of simple two-node plans") {
    Grid1D g = make_grid_unit_weights(0.0, 1.0, 2);

    DTensor diag(2, 2);
    diag.v[0] = 0.5;  // (0,0)
    diag.v[3] = 0.5;  // (1,1)
    TransportPlan p = make_plan(g, 2, diag, true);
    DTensor m1 = marginal_k(p, 1);
    CHECK(m1.v[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m1.v[1] == doctest::Approx(0.5).epsilon(1e-15));

    MarginalDensity mu = make_marginal(g, {0.3, 0.7}, 2);
    TransportPlan prod = product_plan(mu, 2);
    DTensor m1p = marginal_k(prod, 1);
    CHECK(m1p.v[0] == doctest::Approx(0.3).epsilon(1e-14));
    CHECK(m1p.v[1] == doctest::Approx(0.7).epsilon(1e-14));

    CHECK_THROWS_AS(marginal_k(p, 0), std::invalid_argument);
    CHECK_THROWS_AS(marginal_k(p, 2), std::invalid_argument);
}

TEST_CASE("three-body marginals: symmetry and tower property by brute force") {
    Grid1D g = make_grid_unit_weights(0.0, 1.0, 2);
    Rng rng(13);
    TransportPlan p = random_symmetric_plan(g, 3, rng);
    DTensor m2 = marginal_k(p, 2);
    // M2 symmetric
    CHECK(m2.v[1] == doctest::Approx(m2.v[2]).epsilon(1e-14));
    // M1(M2) = M1, checked against brute-force summation over all tuples
    DTensor m1 = marginal_k(p, 1);
    for (int i = 0; i < 2; ++i) {
        double ref = 0.0;
        MultiIndex mi(2, 3);
        std::size_t f = 0;
        do {
            if (mi.idx[0] == i) ref += p.values.v[f];
            ++f;
        } while (mi.advance());
        CHECK(m1.v[i] == doctest::Approx(ref).epsilon(1e-13));
        double from_m2 = m2.v[static_cast<std::size_t>(i) * 2] + m2.v[static_cast<std::size_t>(i) * 2 + 1];
        CHECK(from_m2 == doctest::Approx(m1.v[i]).epsilon(1e-13));
    }
}

TEST_CASE("coulomb energy on hand-checkable plans") {
    Grid1D g = make_grid_unit_weights(0.0, 1.0, 2);
    CostMatrix c = coulomb_cost(g);

    DTensor off(2, 2);
    off.v[1] = 0.5;  // (0,1)
    off.v[2] = 0.5;  // (1,0)
    TransportPlan swap = make_plan(g, 2, off, true);
    CHECK(coulomb_energy(swap, c) == doctest::Approx(1.0).epsilon(1e-15));

    Grid1D g4 = make_grid_unit_weights(0.0, 3.0, 4);
    CostMatrix c4 = coulomb_cost(g4);
    DTensor point(4, 2);
    point.v[static_cast<std::size_t>(1) * 4 + 3] = 1.0;  // x=1, y=3
    TransportPlan pp = make_plan(g4, 2, point, false);
    CHECK(coulomb_energy(pp, c4) == doctest::Approx(0.5).epsilon(1e-15));

    // strict mode: diagonal mass reports the infinity sentinel
    DTensor diag(2, 2);
    diag.v[0] = 1.0;
    TransportPlan dp = make_plan(g, 2, diag, true);
    CostMatrix strict = coulomb_cost(g, -1.0, true);
    CHECK(std::isinf(coulomb_energy(dp, strict)));
}

TEST_CASE("pair reduction for symmetric three-body plans") {
    Grid1D g = make_grid_unit_weights(0.0, 2.0, 3);
    Rng rng(21);
    TransportPlan p = random_symmetric_plan(g, 3, rng);
    CostMatrix c = coulomb_cost(g);
    DTensor m2 = marginal_k(p, 2);
    double v2 = 0.0;  // brute-force double sum
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            v2 += m2.v[static_cast<std::size_t>(i) * 3 + j] * c.values[static_cast<std::size_t>(i) * 3 + j];
    CHECK(coulomb_energy(p, c) == doctest::Approx(3.0 * v2).epsilon(1e-12));
}

TEST_CASE("kinetic energy") {
    Grid1D g = make_grid(0.0, 1.0, 201);

    // constant amplitude: zero gradient
    Wavefunction flat = make_wavefunction(g, 2, false);
    for (auto& z : flat.blocks[0].v) z = 1.0;
    wf_normalize(flat);
    CHECK(kinetic_energy(flat) == doctest::Approx(0.0).epsilon(1e-15));

    // product structure: N * one-body energy
    std::vector<double> dens(g.n);
    for (int i = 0; i < g.n; ++i) dens[i] = 1.0 + 0.5 * std::sin(2.0 * kPi * g.nodes[i]);
    MarginalDensity mu = make_marginal(g, dens, 2, true);
    Wavefunction prod = make_wavefunction(g, 2, false);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            prod.blocks[0].v[static_cast<std::size_t>(i) * g.n + j] =
                std::sqrt(mu.values[i] * mu.values[j]);
    std::vector<double> sq(g.n);
    for (int i = 0; i < g.n; ++i) sq[i] = std::sqrt(mu.values[i]);
    std::vector<double> ds = gradient_fd(g, sq);
    double one_body = 0.0;
    for (int i = 0; i < g.n; ++i) one_body += g.weights[i] * ds[i] * ds[i];
    CHECK(kinetic_energy(prod) == doctest::Approx(2.0 * one_body).epsilon(1e-10));

    // sine ground-state profile: analytic value pi^2 within 1%
    Wavefunction sine = make_wavefunction(g, 1, false);
    for (int i = 0; i < g.n; ++i) sine.blocks[0].v[i] = std::sqrt(2.0) * std::sin(kPi * g.nodes[i]);
    wf_normalize(sine);
    CHECK(kinetic_energy(sine) == doctest::Approx(kPi * kPi).epsilon(0.01));
}

TEST_CASE("hoffmann-ostenhof comparison") {
    Grid1D g = make_grid(0.0, 1.0, 201);

    // positive product: equality up to discretization
    Wavefunction w = make_wavefunction(g, 2, false);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            w.blocks[0].v[static_cast<std::size_t>(i) * g.n + j] =
                (1.0 + 0.3 * std::sin(2.0 * kPi * g.nodes[i])) * (1.2 - g.nodes[j] * 0.5);
    wf_normalize(w);
    auto [lhs, rhs] = hoffmann_ostenhof_check(w);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));

    // random positive amplitude: inequality with finite-difference allowance
    Rng rng(4);
    Wavefunction r = make_wavefunction(g, 2, false);
    for (auto& z : r.blocks[0].v) z = rng.uniform(0.05, 1.0);
    wf_normalize(r);
    auto [l2, r2] = hoffmann_ostenhof_check(r);
    CHECK(l2 <= r2 * (1.0 + 1e-3));

    // non-product state with a sign change in the second coordinate:
    // strictly below (products, even signed ones, sit at equality)
    Wavefunction sgn = make_wavefunction(g, 2, false);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            sgn.blocks[0].v[static_cast<std::size_t>(i) * g.n + j] =
                (1.0 + 0.2 * g.nodes[i]) * std::sin(2.0 * kPi * g.nodes[j]) +
                0.5 * g.nodes[i] * g.nodes[i] * std::cos(2.0 * kPi * g.nodes[j]);
    wf_normalize(sgn);
    auto [l3, r3] = hoffmann_ostenhof_check(sgn);
    CHECK(l3 < r3 * 0.99);
}

TEST_CASE("hoffmann-ostenhof overshoot stays within tol(h) under refinement") {
    // positive products sit at discrete equality to machine precision (the
    // discrete marginal square root factorizes exactly), and generic states
    // stay strictly inside; the allowed overshoot never grows with n
    Rng rng(91);
    for (int n : {51, 101, 201}) {
        Grid1D g = make_grid(0.0, 1.0, n);
        Wavefunction w = make_wavefunction(g, 2, false);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                w.blocks[0].v[static_cast<std::size_t>(i) * g.n + j] =
                    (1.0 + 0.3 * std::sin(2.0 * kPi * g.nodes[i])) *
                    (1.0 + 0.3 * std::cos(2.0 * kPi * g.nodes[j]));
        wf_normalize(w);
        auto [lhs, rhs] = hoffmann_ostenhof_check(w);
        CHECK(lhs <= rhs * (1.0 + 1e-12));

        Wavefunction r = make_wavefunction(g, 2, false);
        for (auto& z : r.blocks[0].v) z = rng.uniform(0.05, 1.0);
        wf_normalize(r);
        auto [l2, r2] = hoffmann_ostenhof_check(r);
        CHECK(l2 <= r2 * (1.0 + 1e-3));
    }
}

TEST_CASE("kinetic energy is invariant under coordinate permutation") {
    Grid1D g = make_grid(0.0, 1.0, 9);
    Rng rng(77);
    Wavefunction w = make_wavefunction(g, 2, false);
    for (auto& z : w.blocks[0].v) z = rng.uniform(-1.0, 1.0);
    wf_normalize(w);
    Wavefunction swapped = w;
    swapped.blocks[0] = permute_axes(w.blocks[0], {1, 0});
    CHECK(kinetic_energy(w) == doctest::Approx(kinetic_energy(swapped)).epsilon(1e-13));
}

TEST_CASE("L1-cap-L3 norm") {
    Grid1D g = make_grid(0.0, 1.0, 11);
    std::vector<double> zero(g.n, 0.0);
    CHECK(l1_l3_norm(g, zero) == 0.0);

    std::vector<double> one(g.n, 1.0);
    CHECK(l1_l3_norm(g, one) == doctest::Approx(1.0).epsilon(1e-14));

    // two-point profile with half weights: L1 = L3 = 0.2, so the max is 0.2
    Grid1D g2 = make_grid_unit_weights(0.0, 1.0, 2);
    g2.weights = {0.5, 0.5};
    CHECK(l1_l3_norm(g2, {0.2, -0.2}) == doctest::Approx(0.2).epsilon(1e-15));
    // and the L3 part never exceeds the L1 part for flat profiles
    double l3 = std::cbrt(0.5 * std::pow(0.2, 3) + 0.5 * std::pow(0.2, 3));
    CHECK(l3 <= 0.2 + 1e-15);
}

TEST_CASE("symmetrization of plans and wavefunctions") {
    Grid1D g = make_grid_unit_weights(0.0, 1.0, 2);
    Rng rng(30);
    TransportPlan sym = random_symmetric_plan(g, 2, rng);
    TransportPlan resym = symmetrize(sym);
    for (std::size_t i = 0; i < sym.values.size(); ++i)
        CHECK(resym.values.v[i] == doctest::Approx(sym.values.v[i]).epsilon(1e-14));

    DTensor point(2, 2);
    point.v[1] = 1.0;  // (0,1)
    TransportPlan half = symmetrize(make_plan(g, 2, point, false));
    CHECK(half.values.v[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(half.values.v[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(half.values.v[0] == 0.0);

    // antisymmetrizing a symmetric product annihilates it
    MarginalDensity mu = make_marginal(g, {0.5, 0.5}, 2);
    Wavefunction prod = wf_from_plan_sqrt(product_plan(mu, 2));
    CHECK_THROWS_AS(symmetrize(prod, true), DegenerateInput);

    // antisymmetrization of a generic state is antisymmetric
    Wavefunction w = make_wavefunction(g, 2, false);
    w.blocks[0].v = {0.9, 0.1, 0.4, 0.2};
    Wavefunction anti = symmetrize(w, true);
    CHECK(anti.blocks[0].v[1].real() == doctest::Approx(-anti.blocks[0].v[2].real()).epsilon(1e-14));
    CHECK(std::abs(anti.blocks[0].v[0]) <= 1e-14);
}

TEST_CASE("plan validation rejects bad input") {
    Grid1D g = make_grid_unit_weights(0.0, 1.0, 2);
    DTensor neg(2, 2);
    neg.v = {0.7, 0.5, 0.0, -0.2};
    CHECK_THROWS_AS(make_plan(g, 2, neg, false), std::invalid_argument);
    DTensor wrong_mass(2, 2);
    wrong_mass.v = {0.7, 0.5, 0.0, 0.2};
    CHECK_THROWS_AS(make_plan(g, 2, wrong_mass, false), std::invalid_argument);
    CHECK_NOTHROW(make_plan(g, 2, wrong_mass, false, true));
}
