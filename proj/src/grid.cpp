#include "scelab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace sce {

std::atomic<bool>& parallel_flag() {
    static std::atomic<bool> flag{true};
    return flag;
}

static Grid1D grid_base(double a, double b, int n) {
    require(n >= 2, "grid needs at least two nodes");
    require(a < b, "grid interval must satisfy a < b");
    Grid1D g;
    g.a = a;
    g.b = b;
    g.n = n;
    g.h = (b - a) / (n - 1);
    g.nodes.resize(n);
    for (int i = 0; i < n; ++i) g.nodes[i] = a + i * g.h;
    return g;
}

Grid1D make_grid(double a, double b, int n) {
    Grid1D g = grid_base(a, b, n);
    g.weights.assign(n, g.h);
    g.weights.front() = 0.5 * g.h;
    g.weights.back() = 0.5 * g.h;
    return g;
}

Grid1D make_grid_unit_weights(double a, double b, int n) {
    Grid1D g = grid_base(a, b, n);
    g.weights.assign(n, 1.0);
    return g;
}

double quadrature(const Grid1D& g, const std::vector<double>& values) {
    require(static_cast<int>(values.size()) == g.n, "quadrature: length mismatch");
    double s = 0.0;
    for (int i = 0; i < g.n; ++i) s += g.weights[i] * values[i];
    return s;
}

std::vector<double> gradient_fd(const Grid1D& g, const std::vector<double>& values) {
    require(static_cast<int>(values.size()) == g.n, "gradient_fd: length mismatch");
    const int n = g.n;
    std::vector<double> out(n);
    out[0] = (values[1] - values[0]) / g.h;
    out[n - 1] = (values[n - 1] - values[n - 2]) / g.h;
    for (int i = 1; i < n - 1; ++i) out[i] = (values[i + 1] - values[i - 1]) / (2.0 * g.h);
    return out;
}

std::vector<double> gradient_matrix(const Grid1D& g) {
    const int n = g.n;
    std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
    m[0 * n + 0] = -1.0 / g.h;
    m[0 * n + 1] = 1.0 / g.h;
    m[(n - 1) * static_cast<size_t>(n) + n - 2] = -1.0 / g.h;
    m[(n - 1) * static_cast<size_t>(n) + n - 1] = 1.0 / g.h;
    for (int i = 1; i < n - 1; ++i) {
        m[i * static_cast<size_t>(n) + i - 1] = -0.5 / g.h;
        m[i * static_cast<size_t>(n) + i + 1] = 0.5 / g.h;
    }
    return m;
}

MollifierKernel gaussian_mollifier(double epsilon, const Grid1D& g) {
    require(epsilon > 0.0, "mollifier width must be positive");
    MollifierKernel k;
    k.epsilon = epsilon;
    int radius = static_cast<int>(std::floor(6.0 * epsilon / g.h));
    radius = std::min(radius, g.n - 1);
    k.radius = radius;
    k.weights.assign(2 * radius + 1, 0.0);
    double sum = 0.0;
    for (int o = -radius; o <= radius; ++o) {
        const double z = o * g.h / epsilon;
        const double w = std::exp(-z * z);
        k.weights[o + radius] = w;
        sum += w;
    }
    for (double& w : k.weights) w /= sum;
    // enforce exact symmetry against rounding in the division
    for (int o = 1; o <= radius; ++o) {
        const double avg = 0.5 * (k.weights[radius + o] + k.weights[radius - o]);
        k.weights[radius + o] = avg;
        k.weights[radius - o] = avg;
    }
    return k;
}

std::vector<double> smoothing_matrix(const MollifierKernel& k, const Grid1D& g) {
    const int n = g.n;
    std::vector<double> s(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j) {
        double colmass = 0.0;
        for (int i = std::max(0, j - k.radius); i <= std::min(n - 1, j + k.radius); ++i)
            colmass += g.weights[i] * k.weights[i - j + k.radius];
        for (int i = std::max(0, j - k.radius); i <= std::min(n - 1, j + k.radius); ++i)
            s[static_cast<size_t>(i) * n + j] =
                k.weights[i - j + k.radius] * g.weights[j] / colmass;
    }
    return s;
}

}  // namespace sce
