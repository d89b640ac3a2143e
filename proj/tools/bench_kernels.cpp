// Times the OpenMP kernels against their serial reference implementations and
// checks that both produce identical bits.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "scelab/grid.hpp"
#include "scelab/reinstate.hpp"
#include "scelab/tensor.hpp"
#include "scelab/verify.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <class F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

double max_abs_diff(const sce::DTensor& a, const sce::DTensor& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.v[i] - b.v[i]));
    return m;
}

}  // namespace

int main() {
    std::printf("kernel,n,axes,serial_ms,omp_ms,speedup,max_abs_diff\n");
    for (auto shape : {std::pair{48, 3}, std::pair{64, 3}, std::pair{64, 2}}) {
        const int n = shape.first;
        const int axes = shape.second;
        sce::Grid1D g = sce::make_grid(0.0, 1.0, n);
        sce::DTensor t(n, axes);
        for (std::size_t i = 0; i < t.size(); ++i)
            t.v[i] = 0.5 + 0.5 * std::sin(0.001 * static_cast<double>(i));
        std::vector<double> m = sce::smoothing_matrix(sce::gaussian_mollifier(3.0 * g.h, g), g);
        std::vector<double> cmat(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                cmat[static_cast<std::size_t>(i) * n + j] = (i == j) ? 10.0 / g.h
                                                                     : 1.0 / (g.h * std::abs(i - j));

        sce::DTensor out_s, out_p;
        const double a_s = time_best_of(3, [&] { sce::kern::apply_axis_serial(t, m, 0, out_s); });
        const double a_p = time_best_of(3, [&] { sce::kern::apply_axis_omp(t, m, 0, out_p); });
        std::printf("apply_axis,%d,%d,%.3f,%.3f,%.2f,%.3g\n", n, axes, a_s, a_p, a_s / a_p,
                    max_abs_diff(out_s, out_p));

        sce::DTensor c_s, c_p;
        const double b_s =
            time_best_of(3, [&] { sce::kern::contract_axis_serial(t, g.weights, axes - 1, c_s); });
        const double b_p =
            time_best_of(3, [&] { sce::kern::contract_axis_omp(t, g.weights, axes - 1, c_p); });
        std::printf("contract_axis,%d,%d,%.3f,%.3f,%.2f,%.3g\n", n, axes, b_s, b_p, b_s / b_p,
                    max_abs_diff(c_s, c_p));

        double e_s = 0.0, e_p = 0.0;
        const double p_s =
            time_best_of(3, [&] { e_s = sce::kern::pair_cost_sum_serial(t, cmat, g.weights); });
        const double p_p =
            time_best_of(3, [&] { e_p = sce::kern::pair_cost_sum_omp(t, cmat, g.weights); });
        std::printf("pair_cost_sum,%d,%d,%.3f,%.3f,%.2f,%.3g\n", n, axes, p_s, p_p, p_s / p_p,
                    std::abs(e_s - e_p));

        // marginal-reinstating projection, the composite hot path
        if (axes <= 3) {
            sce::Rng rng(7);
            sce::TransportPlan plan = sce::random_symmetric_plan(g, axes, rng);
            sce::MarginalDensity target = sce::random_density(g, rng, axes);
            sce::TransportPlan out_serial = plan, out_parallel = plan;
            sce::set_parallel(false);
            const double q_s = time_best_of(3, [&] { out_serial = sce::project(plan, target); });
            sce::set_parallel(true);
            const double q_p = time_best_of(3, [&] { out_parallel = sce::project(plan, target); });
            double d = 0.0;
            for (std::size_t i = 0; i < out_serial.values.size(); ++i)
                d = std::max(d, std::abs(out_serial.values.v[i] - out_parallel.values.v[i]));
            std::printf("project,%d,%d,%.3f,%.3f,%.2f,%.3g\n", n, axes, q_s, q_p, q_s / q_p, d);
        }
    }
    return 0;
}
