#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "scelab/fermionize.hpp"
#include "scelab/harriman.hpp"

using namespace sce;

namespace {

Wavefunction smooth_bosonic_state(const Grid1D& g, int nb) {
    std::vector<double> dens(g.n);
    for (int i = 0; i < g.n; ++i) dens[i] = 1.0 + 0.4 * std::sin(2.0 * kPi * g.nodes[i]);
    MarginalDensity mu = make_marginal(g, dens, nb, true);
    return wf_from_plan_sqrt(product_plan(mu, nb));
}

// reference N-body interaction energy of a spinful state by direct summation
double brute_vee(const Wavefunction& w, const CostMatrix& c) {
    DTensor dens = wf_position_density(w);
    return coulomb_energy_tensor(dens, w.grid, c);
}

}  // namespace

TEST_CASE("scalar node profile") {
    CHECK(node_s(0.0) == 0.0);
    CHECK(node_c(0.0) == 1.0);
    CHECK(node_s(1.0) == doctest::Approx(1.0));
    CHECK(node_s(-1.0) == doctest::Approx(-1.0));
    CHECK(node_c(1.0) == 0.0);
    CHECK(node_c(-1.0) == 0.0);
    CHECK(node_s(2.5) == 1.0);
    CHECK(node_s(-7.0) == -1.0);
    // continuity across the matching points and the pointwise identity
    for (double z = -1.5; z <= 1.5; z += 0.01) {
        CHECK(node_s(z) == doctest::Approx(-node_s(-z)).epsilon(1e-15));
        CHECK(node_s(z) * node_s(z) + node_c(z) * node_c(z) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK(node_s(1.0 - 1e-9) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("node factor tensors") {
    Grid1D g = make_grid(0.0, 1.0, 13);
    for (int nb : {2, 3}) {
        NodeFunctions nf = make_node_functions(3.0 * g.h, g, nb);
        for (std::size_t i = 0; i < nf.A.size(); ++i)
            CHECK(nf.A.v[i] * nf.A.v[i] + nf.B.v[i] * nf.B.v[i] ==
                  doctest::Approx(1.0).epsilon(1e-12));
        // swap antisymmetry of A, symmetry of B
        std::vector<int> swap01(nb);
        for (int k = 0; k < nb; ++k) swap01[k] = k;
        std::swap(swap01[0], swap01[1]);
        DTensor aswap = permute_axes(nf.A, swap01);
        DTensor bswap = permute_axes(nf.B, swap01);
        for (std::size_t i = 0; i < nf.A.size(); ++i) {
            CHECK(aswap.v[i] == doctest::Approx(-nf.A.v[i]).epsilon(1e-15));
            CHECK(bswap.v[i] == doctest::Approx(nf.B.v[i]).epsilon(1e-15));
        }
        // A = +-1 once all pair distances exceed delta; zero on the diagonal
        MultiIndex mi(g.n, nb);
        std::size_t f = 0;
        do {
            bool all_far = true, any_equal = false;
            for (int a = 0; a < nb; ++a)
                for (int b = a + 1; b < nb; ++b) {
                    const double d = std::abs(g.nodes[mi.idx[a]] - g.nodes[mi.idx[b]]);
                    if (d <= nf.delta) all_far = false;
                    if (mi.idx[a] == mi.idx[b]) any_equal = true;
                }
            if (all_far) CHECK(std::abs(std::abs(nf.A.v[f]) - 1.0) <= 1e-15);
            if (any_equal) CHECK(nf.A.v[f] == 0.0);
            ++f;
        } while (mi.advance());
    }
    CHECK_THROWS_AS(make_node_functions(0.0, g, 2), std::invalid_argument);
}

TEST_CASE("B slope bound under refinement") {
    for (int n : {17, 33}) {
        Grid1D g = make_grid(0.0, 1.0, n);
        const double delta = 4.0 / (n - 1);
        NodeFunctions nf = make_node_functions(delta, g, 2);
        const std::vector<double> d = gradient_matrix(g);
        double slope = 0.0;
        for (int axis = 0; axis < 2; ++axis) {
            DTensor db = kern::apply_axis(nf.B, d, axis);
            for (double x : db.v) slope = std::max(slope, std::abs(x));
        }
        CHECK(slope <= 1.1 * node_b_slope_bound(2, delta));
    }
}

TEST_CASE("node insertion") {
    Grid1D g = make_grid(0.0, 1.0, 17);
    Wavefunction phi = smooth_bosonic_state(g, 2);
    CostMatrix c = coulomb_cost(g);
    DTensor phi2 = wf_position_density(phi);

    // small delta: density equals |phi|^2 off-diagonal, zero on the diagonal
    NodeFunctions tiny = make_node_functions(0.5 * g.h, g, 2);
    NodeInsertion ins0 = insert_node(phi, tiny);
    MultiIndex mi(g.n, 2);
    std::size_t f = 0;
    do {
        if (mi.idx[0] == mi.idx[1])
            CHECK(ins0.rho_N.v[f] == 0.0);
        else
            CHECK(ins0.rho_N.v[f] == doctest::Approx(phi2.v[f]).epsilon(1e-12));
        ++f;
    } while (mi.advance());

    // swap flips the sign of the inserted state exactly
    NodeFunctions nf = make_node_functions(2.0 * g.h, g, 2);
    NodeInsertion ins = insert_node(phi, nf);
    const int allup = 3;
    CTensor swapped = permute_axes(ins.psi_delta.blocks[allup], {1, 0});
    for (std::size_t i = 0; i < swapped.size(); ++i)
        CHECK(swapped.v[i].real() ==
              doctest::Approx(-ins.psi_delta.blocks[allup].v[i].real()).epsilon(1e-15));

    // squeeze and monotone energy convergence over the delta ladder
    const double vphi = coulomb_energy_tensor(phi2, g, c);
    double prev = std::numeric_limits<double>::infinity();
    for (double delta : {4.0 * g.h, 2.0 * g.h, g.h}) {
        NodeInsertion i2 = insert_node(phi, make_node_functions(delta, g, 2));
        for (std::size_t k = 0; k < phi2.size(); ++k) {
            CHECK(i2.rho_N.v[k] >= -1e-15);
            CHECK(i2.rho_N.v[k] <= phi2.v[k] + 1e-12);
        }
        const double diff = std::abs(coulomb_energy_tensor(i2.rho_N, g, c) - vphi);
        CHECK(diff <= prev + 1e-12);
        prev = diff;
    }
}

TEST_CASE("excess density identities") {
    Grid1D g = make_grid(0.0, 1.0, 17);
    Wavefunction phi = smooth_bosonic_state(g, 2);
    DTensor phi2 = wf_position_density(phi);
    double prev_mass = std::numeric_limits<double>::infinity();
    for (double delta : {4.0 * g.h, 2.0 * g.h, g.h}) {
        NodeFunctions nf = make_node_functions(delta, g, 2);
        ExcessDensity ex = excess_density(phi, nf);
        NodeInsertion ins = insert_node(phi, nf);
        DTensor phip2 = wf_position_density(ex.phi_prime);
        for (std::size_t i = 0; i < phi2.size(); ++i)
            CHECK(phip2.v[i] + ins.rho_N.v[i] == doctest::Approx(phi2.v[i]).epsilon(1e-12));
        // marginal of |phi'|^2 equals the excess density
        DTensor m = phip2;
        m = kern::contract_axis(m, g.weights, 1);
        for (int i = 0; i < g.n; ++i) {
            CHECK(ex.rho_prime[i] >= 0.0);
            CHECK(2.0 * m.v[i] == doctest::Approx(ex.rho_prime[i]).epsilon(1e-12));
        }
        double mass = 0.0;
        for (int i = 0; i < g.n; ++i) mass += g.weights[i] * ex.rho_prime[i];
        CHECK(mass <= prev_mass + 1e-12);  // excess mass shrinks with delta
        prev_mass = mass;
    }
}

TEST_CASE("wavefunction matching") {
    Grid1D g = make_grid(0.0, 1.0, 13);
    Wavefunction phi = smooth_bosonic_state(g, 2);
    NodeFunctions nf = make_node_functions(2.0 * g.h, g, 2);
    NodeInsertion ins = insert_node(phi, nf);

    // second antisymmetric state: determinant of two real orbitals
    MarginalDensity mu = uniform_marginal(g, 2);
    OrbitalSet os = harriman_orbitals(mu, OrbitalKind::real_trig);
    std::vector<SpinOrbital> orbs(2);
    for (int k = 0; k < 2; ++k) {
        orbs[k].up.assign(os.values[k].begin(), os.values[k].end());
        orbs[k].dn.assign(g.n, 0.0);
    }
    Wavefunction det = slater_determinant(g, orbs);

    Wavefunction zero = make_wavefunction(g, 2, true);
    Wavefunction same = match_wavefunctions(ins.psi_delta, zero);
    DTensor d0 = wf_position_density(same), d1 = wf_position_density(ins.psi_delta);
    for (std::size_t i = 0; i < d0.size(); ++i)
        CHECK(d0.v[i] == doctest::Approx(d1.v[i]).epsilon(1e-14));

    Wavefunction matched = match_wavefunctions(ins.psi_delta, det);
    DTensor da = wf_position_density(ins.psi_delta);
    DTensor db = wf_position_density(det);
    DTensor dm = wf_position_density(matched);
    for (std::size_t i = 0; i < dm.size(); ++i)
        CHECK(dm.v[i] == doctest::Approx(da.v[i] + db.v[i]).epsilon(1e-12));
    CostMatrix c = coulomb_cost(g);
    CHECK(brute_vee(matched, c) ==
          doctest::Approx(brute_vee(ins.psi_delta, c) + brute_vee(det, c)).epsilon(1e-10));

    // the plain sum breaks additivity (interference term)
    Wavefunction plain = make_wavefunction(g, 2, true);
    for (int b = 0; b < 4; ++b)
        for (std::size_t i = 0; i < plain.blocks[b].size(); ++i)
            plain.blocks[b].v[i] = ins.psi_delta.blocks[b].v[i] + det.blocks[b].v[i];
    DTensor dp = wf_position_density(plain);
    double worst = 0.0;
    for (std::size_t i = 0; i < dp.size(); ++i)
        worst = std::max(worst, std::abs(dp.v[i] - da.v[i] - db.v[i]));
    CHECK(worst > 1e-6);

    // complex inputs are rejected
    Wavefunction complex_in = det;
    complex_in.blocks[3].v[1] += std::complex<double>(0.0, 0.5);
    CHECK_THROWS_AS(match_wavefunctions(complex_in, det), std::invalid_argument);
}

TEST_CASE("slater interaction: identity, bound, and brute force") {
    Grid1D g = make_grid(0.0, 1.0, 33);
    CostMatrix c = coulomb_cost(g);

    // N = 1: no pairs
    MarginalDensity mu1 = uniform_marginal(g, 1);
    OrbitalSet o1 = harriman_orbitals(mu1, OrbitalKind::real_trig);
    std::vector<SpinOrbital> s1(1);
    s1[0].up.assign(o1.values[0].begin(), o1.values[0].end());
    s1[0].dn.assign(g.n, 0.0);
    auto [dx1, dir1] = slater_vee(g, s1, c);
    Wavefunction d1 = slater_determinant(g, s1);
    DTensor dens1 = wf_position_density(d1);
    double direct1 = 0.0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            direct1 += 0.5 * g.weights[i] * g.weights[j] * dens1.v[i] * dens1.v[j] *
                       c.values[static_cast<std::size_t>(i) * g.n + j];
    CHECK(dx1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dir1 == doctest::Approx(direct1).epsilon(1e-10));

    // disjoint supports: exchange vanishes
    std::vector<SpinOrbital> dis(2);
    dis[0].up.assign(g.n, 0.0);
    dis[0].dn.assign(g.n, 0.0);
    dis[1] = dis[0];
    for (int i = 0; i < g.n / 2; ++i) dis[0].up[i] = 1.0;
    for (int i = g.n / 2; i < g.n; ++i) dis[1].up[i] = 1.0;
    auto normalize = [&](SpinOrbital& o) {
        double n2 = 0.0;
        for (int i = 0; i < g.n; ++i) n2 += g.weights[i] * std::norm(o.up[i]);
        for (int i = 0; i < g.n; ++i) o.up[i] /= std::sqrt(n2);
    };
    normalize(dis[0]);
    normalize(dis[1]);
    auto [dxd, dird] = slater_vee(g, dis, c);
    CHECK(dxd <= dird + 1e-12);
    // only the self-interaction exchange remains, which equals the same-spin
    // self terms; cross exchange vanishes by disjointness
    Wavefunction dd = slater_determinant(g, dis);
    CHECK(dxd == doctest::Approx(brute_vee(dd, c)).epsilon(1e-8));

    // two orbitals with same spin: identity vs brute-force determinant
    MarginalDensity mu2 = uniform_marginal(g, 2);
    OrbitalSet o2 = harriman_orbitals(mu2, OrbitalKind::real_trig);
    std::vector<SpinOrbital> s2(2);
    for (int k = 0; k < 2; ++k) {
        s2[k].up.assign(o2.values[k].begin(), o2.values[k].end());
        s2[k].dn.assign(g.n, 0.0);
    }
    auto [dx2, dir2] = slater_vee(g, s2, c);
    CHECK(dx2 <= dir2 + 1e-10);
    CHECK(dx2 == doctest::Approx(brute_vee(slater_determinant(g, s2), c)).epsilon(1e-8));

    // three orbitals, mixed spins
    MarginalDensity mu3 = uniform_marginal(g, 3);
    OrbitalSet o3 = harriman_orbitals(mu3, OrbitalKind::real_trig);
    std::vector<SpinOrbital> s3(3);
    for (int k = 0; k < 3; ++k) {
        s3[k].up.assign(g.n, 0.0);
        s3[k].dn.assign(g.n, 0.0);
    }
    for (int i = 0; i < g.n; ++i) {
        s3[0].up[i] = o3.values[0][i];
        s3[1].dn[i] = o3.values[1][i];
        s3[2].up[i] = o3.values[2][i];
    }
    auto [dx3, dir3] = slater_vee(g, s3, c);
    CHECK(dx3 <= dir3 + 1e-10);
    CHECK(dx3 == doctest::Approx(brute_vee(slater_determinant(g, s3), c)).epsilon(1e-8));

    // non-orthonormal input rejected
    std::vector<SpinOrbital> bad = s2;
    bad[1] = bad[0];
    CHECK_THROWS_AS(slater_vee(g, bad, c), std::invalid_argument);
}

TEST_CASE("bosonic-fermionic comparison") {
    Grid1D g = make_grid(0.0, 1.0, 21);
    CostMatrix c = coulomb_cost(g);

    // spin-singlet product: equal kinetic energies
    std::vector<double> dens(g.n);
    for (int i = 0; i < g.n; ++i) dens[i] = 1.0 + 0.3 * std::cos(2.0 * kPi * g.nodes[i]);
    MarginalDensity mu = make_marginal(g, dens, 2, true);
    std::vector<SpinOrbital> pair(2);
    pair[0].up.assign(g.n, 0.0);
    pair[0].dn.assign(g.n, 0.0);
    pair[1] = pair[0];
    for (int i = 0; i < g.n; ++i) {
        pair[0].up[i] = std::sqrt(mu.values[i]);
        pair[1].dn[i] = std::sqrt(mu.values[i]);
    }
    Wavefunction singlet = slater_determinant(g, pair);
    BosFerRelation r1 = bosonic_fermionic_relation(singlet, c);
    CHECK(r1.t_bosonic == doctest::Approx(r1.t_fermionic).epsilon(1e-6));
    CHECK(r1.vee_equal);

    // generic same-spin determinant: strict inequality direction
    MarginalDensity mu2 = uniform_marginal(g, 2);
    OrbitalSet o2 = harriman_orbitals(mu2, OrbitalKind::real_trig);
    std::vector<SpinOrbital> s2(2);
    for (int k = 0; k < 2; ++k) {
        s2[k].up.assign(o2.values[k].begin(), o2.values[k].end());
        s2[k].dn.assign(g.n, 0.0);
    }
    BosFerRelation r2 = bosonic_fermionic_relation(slater_determinant(g, s2), c);
    CHECK(r2.t_bosonic <= r2.t_fermionic * (1.0 + 1e-3));
    CHECK(r2.vee_equal);
}
