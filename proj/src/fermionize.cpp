#include "scelab/fermionize.hpp"

#include <algorithm>
#include <cmath>

namespace sce {

double node_s(double z) {
    if (z >= 1.0) return 1.0;
    if (z <= -1.0) return -1.0;
    return std::sin(0.5 * kPi * z);
}

double node_c(double z) {
    if (z >= 1.0 || z <= -1.0) return 0.0;
    return std::cos(0.5 * kPi * z);
}

NodeFunctions make_node_functions(double delta, const Grid1D& g, int n_bodies) {
    require(delta > 0.0, "node functions: delta must be positive");
    require(n_bodies >= 2, "node functions: need at least two bodies");
    NodeFunctions nf;
    nf.delta = delta;
    nf.grid = g;
    nf.n_bodies = n_bodies;
    nf.A = DTensor(g.n, n_bodies);
    nf.B = DTensor(g.n, n_bodies);
    MultiIndex mi(g.n, n_bodies);
    std::size_t f = 0;
    do {
        double a = 1.0;
        for (int i = 0; i < n_bodies; ++i)
            for (int j = i + 1; j < n_bodies; ++j)
                a *= node_s((g.nodes[mi.idx[i]] - g.nodes[mi.idx[j]]) / delta);
        nf.A.v[f] = a;
        nf.B.v[f] = std::sqrt(std::max(0.0, 1.0 - a * a));
        ++f;
    } while (mi.advance());
    return nf;
}

NodeInsertion insert_node(const Wavefunction& phi, const NodeFunctions& nf) {
    require(!phi.spinful, "insert_node: phi must be spinless");
    require(phi.n_bodies == nf.n_bodies && phi.grid.n == nf.grid.n,
            "insert_node: shape mismatch");
    NodeInsertion out;
    out.psi_delta = make_wavefunction(phi.grid, phi.n_bodies, true);
    const int allup = (1 << phi.n_bodies) - 1;
    CTensor& dst = out.psi_delta.blocks[allup];
    out.rho_N = DTensor(phi.grid.n, phi.n_bodies);
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst.v[i] = nf.A.v[i] * phi.blocks[0].v[i];
        out.rho_N.v[i] = std::norm(dst.v[i]);
    }
    return out;
}

ExcessDensity excess_density(const Wavefunction& phi, const NodeFunctions& nf) {
    require(!phi.spinful, "excess_density: phi must be spinless");
    NodeInsertion ins = insert_node(phi, nf);
    const int nb = phi.n_bodies;
    const Grid1D& g = phi.grid;

    DTensor dens_phi = wf_position_density(phi);
    DTensor diff = dens_phi;
    for (std::size_t i = 0; i < diff.size(); ++i) diff.v[i] -= ins.rho_N.v[i];
    // one-body excess, physics normalization
    DTensor m = diff;
    for (int axis = nb - 1; axis >= 1; --axis) m = kern::contract_axis(m, g.weights, axis);
    ExcessDensity out;
    out.rho_prime.resize(g.n);
    for (int i = 0; i < g.n; ++i) out.rho_prime[i] = std::max(0.0, nb * m.v[i]);

    out.phi_prime = make_wavefunction(g, nb, false);
    for (std::size_t i = 0; i < out.phi_prime.blocks[0].size(); ++i)
        out.phi_prime.blocks[0].v[i] = nf.B.v[i] * phi.blocks[0].v[i];
    return out;
}

static void require_real(const Wavefunction& w, const char* who) {
    for (const auto& b : w.blocks)
        for (const auto& z : b.v)
            require(std::abs(z.imag()) <= 1e-12, std::string(who) + ": input must be real-valued");
}

Wavefunction match_wavefunctions(const Wavefunction& psi, const Wavefunction& psi_prime) {
    require(psi.spinful == psi_prime.spinful && psi.n_bodies == psi_prime.n_bodies &&
                psi.grid.n == psi_prime.grid.n,
            "match_wavefunctions: shape mismatch");
    require_real(psi, "match_wavefunctions");
    require_real(psi_prime, "match_wavefunctions");
    Wavefunction out = make_wavefunction(psi.grid, psi.n_bodies, psi.spinful);
    for (int b = 0; b < psi.block_count(); ++b)
        for (std::size_t i = 0; i < out.blocks[b].size(); ++i)
            out.blocks[b].v[i] = std::complex<double>(psi.blocks[b].v[i].real(),
                                                      psi_prime.blocks[b].v[i].real());
    return out;
}

std::pair<double, double> slater_vee(const Grid1D& g, const std::vector<SpinOrbital>& orbitals,
                                     const CostMatrix& cost) {
    const int n = g.n;
    const int N = static_cast<int>(orbitals.size());
    for (const auto& o : orbitals)
        require(static_cast<int>(o.up.size()) == n && static_cast<int>(o.dn.size()) == n,
                "slater_vee: orbital length mismatch");
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            std::complex<double> ip = 0.0;
            for (int i = 0; i < n; ++i)
                ip += g.weights[i] * (std::conj(orbitals[a].up[i]) * orbitals[b].up[i] +
                                      std::conj(orbitals[a].dn[i]) * orbitals[b].dn[i]);
            const double target = (a == b) ? 1.0 : 0.0;
            require(std::abs(ip - target) <= 1e-8, "slater_vee: orbitals must be orthonormal");
        }

    std::vector<double> rho(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < N; ++k)
            rho[i] += std::norm(orbitals[k].up[i]) + std::norm(orbitals[k].dn[i]);

    // same-spin one-body density matrices
    std::vector<std::complex<double>> gup(static_cast<std::size_t>(n) * n, 0.0),
        gdn(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < N; ++k) {
                gup[static_cast<std::size_t>(i) * n + j] +=
                    orbitals[k].up[i] * std::conj(orbitals[k].up[j]);
                gdn[static_cast<std::size_t>(i) * n + j] +=
                    orbitals[k].dn[i] * std::conj(orbitals[k].dn[j]);
            }

    double direct = 0.0, exchange = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double wc = g.weights[i] * g.weights[j] *
                              cost.values[static_cast<std::size_t>(i) * n + j];
            direct += wc * rho[i] * rho[j];
            exchange += wc * (std::norm(gup[static_cast<std::size_t>(i) * n + j]) +
                              std::norm(gdn[static_cast<std::size_t>(i) * n + j]));
        }
    return {0.5 * (direct - exchange), 0.5 * direct};
}

Wavefunction slater_determinant(const Grid1D& g, const std::vector<SpinOrbital>& orbitals) {
    const int N = static_cast<int>(orbitals.size());
    require(N >= 1 && N <= 3, "slater_determinant: N must be at most 3");
    Wavefunction w = make_wavefunction(g, N, true);
    const double scale = 1.0 / std::sqrt(std::tgamma(N + 1.0));
    for (int blk = 0; blk < w.block_count(); ++blk) {
        CTensor& dst = w.blocks[blk];
        MultiIndex mi(g.n, N);
        std::size_t f = 0;
        do {
            // m(k,l) = orbital k evaluated at particle l's space-spin point
            std::complex<double> m[3][3];
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) {
                    const bool up = (blk >> l) & 1;
                    m[k][l] = up ? orbitals[k].up[mi.idx[l]] : orbitals[k].dn[mi.idx[l]];
                }
            std::complex<double> det;
            if (N == 1) {
                det = m[0][0];
            } else if (N == 2) {
                det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            } else {
                det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            }
            dst.v[f] = scale * det;
            ++f;
        } while (mi.advance());
    }
    return w;
}

BosFerRelation bosonic_fermionic_relation(const Wavefunction& psi, const CostMatrix& cost) {
    BosFerRelation r;
    r.t_fermionic = kinetic_energy(psi);
    DTensor dens = wf_position_density(psi);
    Wavefunction phi = make_wavefunction(psi.grid, psi.n_bodies, false);
    for (std::size_t i = 0; i < dens.size(); ++i)
        phi.blocks[0].v[i] = std::sqrt(std::max(0.0, dens.v[i]));
    r.t_bosonic = kinetic_energy(phi);
    const double vf = coulomb_energy_tensor(dens, psi.grid, cost);
    const double vb = coulomb_energy_tensor(wf_position_density(phi), psi.grid, cost);
    r.vee_equal = std::abs(vf - vb) <= 1e-10 * std::max(1.0, std::abs(vf));
    return r;
}

double node_b_slope_bound(int n_bodies, double delta) {
    const int m = n_bodies * (n_bodies - 1) / 2;
    return (std::pow(2.0, m) - 1.0) * (n_bodies - 1) * 0.5 * kPi / delta;
}

}  // namespace sce
