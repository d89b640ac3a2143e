#include "scelab/harriman.hpp"

#include <algorithm>
#include <cmath>

namespace sce {

MonotoneMap standard_map(const MarginalDensity& v) {
    const Grid1D& g = v.grid;
    MonotoneMap m;
    m.grid = g;
    m.F.assign(g.n, 0.0);
    for (int i = 1; i < g.n; ++i)
        m.F[i] = m.F[i - 1] + 0.5 * g.h * (v.values[i - 1] + v.values[i]);
    const double total = m.F.back();
    require(total > 0.0, "standard_map: zero total mass");
    for (double& x : m.F) x = std::clamp(x / total, 0.0, 1.0);
    m.F.back() = 1.0;
    return m;
}

double map_inverse(const MonotoneMap& m, double t) {
    const int n = m.grid.n;
    t = std::clamp(t, 0.0, 1.0);
    // left-continuous generalized inverse: first node where F reaches t
    auto it = std::lower_bound(m.F.begin(), m.F.end(), t);
    int i = static_cast<int>(it - m.F.begin());
    if (i <= 0) return m.grid.nodes[0];
    if (i >= n) return m.grid.nodes[n - 1];
    const double df = m.F[i] - m.F[i - 1];
    if (df <= 0.0) return m.grid.nodes[i];
    return m.grid.nodes[i - 1] + m.grid.h * (t - m.F[i - 1]) / df;
}

std::vector<std::complex<double>> pushforward(
    const std::function<std::complex<double>(double)>& f, const MonotoneMap& m) {
    std::vector<std::complex<double>> out(m.grid.n);
    for (int i = 0; i < m.grid.n; ++i) out[i] = f(m.F[i]);
    return out;
}

std::vector<std::complex<double>> lift(const std::function<std::complex<double>(double)>& f,
                                       const MarginalDensity& v) {
    MonotoneMap m = standard_map(v);
    std::vector<std::complex<double>> out(v.grid.n);
    for (int i = 0; i < v.grid.n; ++i) out[i] = std::sqrt(v.values[i]) * f(m.F[i]);
    return out;
}

namespace {

std::complex<double> eval_spec(const OrbitalSpec& s, double t) {
    std::complex<double> z = 0.0;
    for (const auto& [c, m] : s.harmonics)
        z += c * std::exp(std::complex<double>(0.0, 2.0 * kPi * m * t));
    return z;
}

std::complex<double> eval_spec_derivative(const OrbitalSpec& s, double t) {
    std::complex<double> z = 0.0;
    for (const auto& [c, m] : s.harmonics)
        z += c * std::complex<double>(0.0, 2.0 * kPi * m) *
             std::exp(std::complex<double>(0.0, 2.0 * kPi * m * t));
    return z;
}

}  // namespace

OrbitalSet harriman_orbitals(const MarginalDensity& mu, OrbitalKind kind) {
    const int N = mu.particle_count;
    require(N >= 1, "harriman_orbitals: N must be positive");
    OrbitalSet s;
    s.grid = mu.grid;
    s.kind = kind;
    s.count = N;
    s.mu = mu;
    s.F = standard_map(mu).F;

    if (kind == OrbitalKind::complex_exp) {
        for (int k = 1; k <= N; ++k) s.specs.push_back({{{1.0, k}}});
    } else {
        const std::complex<double> I(0.0, 1.0);
        const double r2 = std::sqrt(2.0);
        for (int k = 1; 2 * k <= N; ++k) {
            // sqrt(2) sin(2 pi k t), sqrt(2) cos(2 pi k t)
            s.specs.push_back({{{r2 / (2.0 * I), k}, {-r2 / (2.0 * I), -k}}});
            s.specs.push_back({{{r2 / 2.0, k}, {r2 / 2.0, -k}}});
        }
        if (N % 2 == 1) s.specs.push_back({{{1.0, 0}}});
    }

    s.values.assign(N, std::vector<std::complex<double>>(mu.grid.n));
    for (int k = 0; k < N; ++k)
        for (int i = 0; i < mu.grid.n; ++i)
            s.values[k][i] = std::sqrt(mu.values[i]) * eval_spec(s.specs[k], s.F[i]);
    return s;
}

std::complex<double> orbital_inner_product(const OrbitalSet& s, int a, int b) {
    // substitution t = F(y): integrate each harmonic exactly over every cell
    auto harmonic_integral = [&](int m) -> std::complex<double> {
        if (m == 0) {
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < s.F.size(); ++i) acc += s.F[i + 1] - s.F[i];
            return acc;
        }
        const std::complex<double> iw(0.0, 2.0 * kPi * m);
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i + 1 < s.F.size(); ++i)
            acc += (std::exp(iw * s.F[i + 1]) - std::exp(iw * s.F[i])) / iw;
        return acc;
    };
    std::complex<double> ip = 0.0;
    for (const auto& [ca, ma] : s.specs[a].harmonics)
        for (const auto& [cb, mb] : s.specs[b].harmonics)
            ip += std::conj(ca) * cb * harmonic_integral(mb - ma);
    return ip;
}

std::complex<double> orbital_inner_product_quadrature(const OrbitalSet& s, int a, int b) {
    std::complex<double> ip = 0.0;
    for (int i = 0; i < s.grid.n; ++i)
        ip += s.grid.weights[i] * std::conj(s.values[a][i]) * s.values[b][i];
    return ip;
}

RegularityReport regularity_check(const OrbitalSet& s) {
    const Grid1D& g = s.grid;
    const int n = g.n;
    RegularityReport rep;
    rep.m1v_bound = *std::max_element(s.mu.values.begin(), s.mu.values.end());

    std::vector<double> sqrt_v(n);
    for (int i = 0; i < n; ++i) sqrt_v[i] = std::sqrt(s.mu.values[i]);
    const std::vector<double> dsqrt = gradient_fd(g, sqrt_v);

    for (int k = 0; k < s.count; ++k) {
        std::vector<double> re(n), im(n);
        for (int i = 0; i < n; ++i) {
            re[i] = s.values[k][i].real();
            im[i] = s.values[k][i].imag();
        }
        const std::vector<double> dre = gradient_fd(g, re);
        const std::vector<double> dim = gradient_fd(g, im);
        double err = 0.0, kin = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::complex<double> fd(dre[i], dim[i]);
            kin += g.weights[i] * std::norm(fd);
            if (i == 0 || i == n - 1) continue;
            const std::complex<double> formula =
                dsqrt[i] * eval_spec(s.specs[k], s.F[i]) +
                sqrt_v[i] * eval_spec_derivative(s.specs[k], s.F[i]) * s.mu.values[i];
            err = std::max(err, std::abs(formula - fd));
        }
        rep.per_orbital_error.push_back(err);
        rep.kinetic.push_back(kin);
        rep.gradient_formula_error = std::max(rep.gradient_formula_error, err);
        require(std::isfinite(kin), "regularity_check: non-finite kinetic energy");
    }
    return rep;
}

}  // namespace sce
