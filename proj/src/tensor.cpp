#include "scelab/tensor.hpp"

#include <cstdint>

namespace sce {
namespace kern {

template <class T>
static inline void apply_axis_cell(const Tensor<T>& in, const std::vector<double>& m, int axis,
                                   Tensor<T>& out, std::int64_t cell) {
    const int n = in.n;
    const std::size_t s = in.stride(axis);
    const std::size_t c = static_cast<std::size_t>(cell);
    const std::size_t t = c % s;
    const std::size_t i = (c / s) % static_cast<std::size_t>(n);
    const std::size_t o = c / (s * static_cast<std::size_t>(n));
    const std::size_t base = o * s * static_cast<std::size_t>(n) + t;
    T acc{};
    const double* row = m.data() + i * static_cast<std::size_t>(n);
    for (int j = 0; j < n; ++j) acc += row[j] * in.v[base + static_cast<std::size_t>(j) * s];
    out.v[c] = acc;
}

template <class T>
void apply_axis_serial(const Tensor<T>& in, const std::vector<double>& m, int axis, Tensor<T>& out) {
    out = Tensor<T>(in.n, in.axes);
    const std::int64_t cells = static_cast<std::int64_t>(in.size());
    for (std::int64_t c = 0; c < cells; ++c) apply_axis_cell(in, m, axis, out, c);
}

template <class T>
void apply_axis_omp(const Tensor<T>& in, const std::vector<double>& m, int axis, Tensor<T>& out) {
    out = Tensor<T>(in.n, in.axes);
    const std::int64_t cells = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < cells; ++c) apply_axis_cell(in, m, axis, out, c);
}

template <class T>
Tensor<T> apply_axis(const Tensor<T>& in, const std::vector<double>& m, int axis) {
    require(axis >= 0 && axis < in.axes, "apply_axis: bad axis");
    require(m.size() == static_cast<std::size_t>(in.n) * in.n, "apply_axis: matrix size mismatch");
    Tensor<T> out;
    if (parallel_enabled())
        apply_axis_omp(in, m, axis, out);
    else
        apply_axis_serial(in, m, axis, out);
    return out;
}

template <class T>
static inline void contract_axis_cell(const Tensor<T>& in, const std::vector<double>& w, int axis,
                                      Tensor<T>& out, std::int64_t cell) {
    const int n = in.n;
    const std::size_t s = in.stride(axis);
    const std::size_t c = static_cast<std::size_t>(cell);
    const std::size_t t = c % s;
    const std::size_t o = c / s;
    const std::size_t base = o * s * static_cast<std::size_t>(n) + t;
    T acc{};
    for (int j = 0; j < n; ++j) acc += w[j] * in.v[base + static_cast<std::size_t>(j) * s];
    out.v[c] = acc;
}

template <class T>
void contract_axis_serial(const Tensor<T>& in, const std::vector<double>& w, int axis, Tensor<T>& out) {
    out = Tensor<T>(in.n, in.axes - 1);
    const std::int64_t cells = static_cast<std::int64_t>(out.size());
    for (std::int64_t c = 0; c < cells; ++c) contract_axis_cell(in, w, axis, out, c);
}

template <class T>
void contract_axis_omp(const Tensor<T>& in, const std::vector<double>& w, int axis, Tensor<T>& out) {
    out = Tensor<T>(in.n, in.axes - 1);
    const std::int64_t cells = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < cells; ++c) contract_axis_cell(in, w, axis, out, c);
}

template <class T>
Tensor<T> contract_axis(const Tensor<T>& in, const std::vector<double>& w, int axis) {
    require(axis >= 0 && axis < in.axes, "contract_axis: bad axis");
    require(static_cast<int>(w.size()) == in.n, "contract_axis: weight size mismatch");
    require(in.axes >= 1, "contract_axis: scalar input");
    Tensor<T> out;
    if (parallel_enabled())
        contract_axis_omp(in, w, axis, out);
    else
        contract_axis_serial(in, w, axis, out);
    return out;
}

static inline double pair_cost_slice(const DTensor& gamma, const std::vector<double>& cost,
                                     const std::vector<double>& w, int i0) {
    const int n = gamma.n;
    const int axes = gamma.axes;
    double acc = 0.0;
    if (axes == 1) return 0.0;  // no pairs
    MultiIndex mi(n, axes - 1);
    const std::size_t slice = gamma.stride(0) * static_cast<std::size_t>(i0);
    std::size_t f = 0;
    do {
        int idx[8];
        idx[0] = i0;
        for (int k = 1; k < axes; ++k) idx[k] = mi.idx[k - 1];
        double c = 0.0;
        for (int a = 0; a < axes; ++a)
            for (int b = a + 1; b < axes; ++b)
                c += cost[static_cast<std::size_t>(idx[a]) * n + idx[b]];
        double wt = w[i0];
        for (int k = 1; k < axes; ++k) wt *= w[idx[k]];
        acc += wt * c * gamma.v[slice + f];
        ++f;
    } while (mi.advance());
    return acc;
}

double pair_cost_sum_serial(const DTensor& gamma, const std::vector<double>& cost,
                            const std::vector<double>& w) {
    std::vector<double> partial(gamma.n, 0.0);
    for (int i0 = 0; i0 < gamma.n; ++i0) partial[i0] = pair_cost_slice(gamma, cost, w, i0);
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double pair_cost_sum_omp(const DTensor& gamma, const std::vector<double>& cost,
                         const std::vector<double>& w) {
    std::vector<double> partial(gamma.n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i0 = 0; i0 < gamma.n; ++i0) partial[i0] = pair_cost_slice(gamma, cost, w, i0);
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double pair_cost_sum(const DTensor& gamma, const std::vector<double>& cost,
                     const std::vector<double>& w) {
    return parallel_enabled() ? pair_cost_sum_omp(gamma, cost, w)
                              : pair_cost_sum_serial(gamma, cost, w);
}

template <class T>
static inline double cell_sq(const T& x) {
    if constexpr (std::is_same_v<T, double>)
        return x * x;
    else
        return std::norm(x);
}

template <class T, bool Square>
static double weighted_reduce_slice(const Tensor<T>& a, const std::vector<double>& w, int i0) {
    const int n = a.n;
    const int axes = a.axes;
    double acc = 0.0;
    const std::size_t slice = (axes >= 1 ? a.stride(0) * static_cast<std::size_t>(i0) : 0);
    if (axes == 1) {
        if constexpr (Square)
            return w[i0] * cell_sq(a.v[i0]);
        else
            return w[i0] * static_cast<double>(std::real(std::complex<double>(a.v[i0])));
    }
    MultiIndex mi(n, axes - 1);
    std::size_t f = 0;
    do {
        double wt = w[i0];
        for (int k = 0; k < axes - 1; ++k) wt *= w[mi.idx[k]];
        if constexpr (Square)
            acc += wt * cell_sq(a.v[slice + f]);
        else
            acc += wt * static_cast<double>(std::real(std::complex<double>(a.v[slice + f])));
        ++f;
    } while (mi.advance());
    return acc;
}

double weighted_norm2_serial(const CTensor& a, const std::vector<double>& w) {
    std::vector<double> partial(a.n, 0.0);
    for (int i0 = 0; i0 < a.n; ++i0) partial[i0] = weighted_reduce_slice<std::complex<double>, true>(a, w, i0);
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double weighted_norm2_omp(const CTensor& a, const std::vector<double>& w) {
    std::vector<double> partial(a.n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i0 = 0; i0 < a.n; ++i0) partial[i0] = weighted_reduce_slice<std::complex<double>, true>(a, w, i0);
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double weighted_norm2(const CTensor& a, const std::vector<double>& w) {
    return parallel_enabled() ? weighted_norm2_omp(a, w) : weighted_norm2_serial(a, w);
}

double weighted_sum_serial(const DTensor& a, const std::vector<double>& w) {
    std::vector<double> partial(a.n, 0.0);
    for (int i0 = 0; i0 < a.n; ++i0) partial[i0] = weighted_reduce_slice<double, false>(a, w, i0);
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double weighted_sum_omp(const DTensor& a, const std::vector<double>& w) {
    std::vector<double> partial(a.n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i0 = 0; i0 < a.n; ++i0) partial[i0] = weighted_reduce_slice<double, false>(a, w, i0);
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

double weighted_sum(const DTensor& a, const std::vector<double>& w) {
    return parallel_enabled() ? weighted_sum_omp(a, w) : weighted_sum_serial(a, w);
}

template void apply_axis_serial<double>(const DTensor&, const std::vector<double>&, int, DTensor&);
template void apply_axis_omp<double>(const DTensor&, const std::vector<double>&, int, DTensor&);
template DTensor apply_axis<double>(const DTensor&, const std::vector<double>&, int);
template void apply_axis_serial<std::complex<double>>(const CTensor&, const std::vector<double>&, int, CTensor&);
template void apply_axis_omp<std::complex<double>>(const CTensor&, const std::vector<double>&, int, CTensor&);
template CTensor apply_axis<std::complex<double>>(const CTensor&, const std::vector<double>&, int);
template void contract_axis_serial<double>(const DTensor&, const std::vector<double>&, int, DTensor&);
template void contract_axis_omp<double>(const DTensor&, const std::vector<double>&, int, DTensor&);
template DTensor contract_axis<double>(const DTensor&, const std::vector<double>&, int);
template void contract_axis_serial<std::complex<double>>(const CTensor&, const std::vector<double>&, int, CTensor&);
template void contract_axis_omp<std::complex<double>>(const CTensor&, const std::vector<double>&, int, CTensor&);
template CTensor contract_axis<std::complex<double>>(const CTensor&, const std::vector<double>&, int);

}  // namespace kern

template <class T>
Tensor<T> permute_axes(const Tensor<T>& in, const std::vector<int>& perm) {
    require(static_cast<int>(perm.size()) == in.axes, "permute_axes: bad permutation size");
    Tensor<T> out(in.n, in.axes);
    MultiIndex mi(in.n, in.axes);
    std::size_t f = 0;
    do {
        int src[8];
        for (int k = 0; k < in.axes; ++k) src[k] = mi.idx[perm[k]];
        out.v[f] = in.v[flat_index(in.n, in.axes, src)];
        ++f;
    } while (mi.advance());
    return out;
}

template DTensor permute_axes<double>(const DTensor&, const std::vector<int>&);
template CTensor permute_axes<std::complex<double>>(const CTensor&, const std::vector<int>&);

double tuple_weight(const std::vector<double>& w, int axes, const int* idx) {
    double wt = 1.0;
    for (int k = 0; k < axes; ++k) wt *= w[idx[k]];
    return wt;
}

}  // namespace sce
