#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include "scelab/common.hpp"

namespace sce {

// Dense tensor on the axes-fold product of an n-node grid, row-major with
// axis 0 slowest.  axes is small (N <= 3 for plans, plus spin blocks held
// separately), n <= 64, so everything stays dense and exact.
template <class T>
struct Tensor {
    int n = 0;
    int axes = 0;
    std::vector<T> v;

    Tensor() = default;
    Tensor(int n_, int axes_) : n(n_), axes(axes_) {
        std::size_t s = 1;
        for (int k = 0; k < axes_; ++k) s *= static_cast<std::size_t>(n_);
        v.assign(s, T{});
    }

    std::size_t size() const { return v.size(); }
    std::size_t stride(int axis) const {
        std::size_t s = 1;
        for (int k = axis + 1; k < axes; ++k) s *= static_cast<std::size_t>(n);
        return s;
    }
    T& operator[](std::size_t i) { return v[i]; }
    const T& operator[](std::size_t i) const { return v[i]; }
};

using DTensor = Tensor<double>;
using CTensor = Tensor<std::complex<double>>;

// Walks all multi-indices of an axes-fold tensor in row-major order.
struct MultiIndex {
    int n, axes;
    std::array<int, 8> idx{};
    explicit MultiIndex(int n_, int axes_) : n(n_), axes(axes_) { idx.fill(0); }
    bool advance() {
        for (int k = axes - 1; k >= 0; --k) {
            if (++idx[k] < n) return true;
            idx[k] = 0;
        }
        return false;
    }
};

inline std::size_t flat_index(int n, int axes, const int* idx) {
    std::size_t f = 0;
    for (int k = 0; k < axes; ++k) f = f * static_cast<std::size_t>(n) + static_cast<std::size_t>(idx[k]);
    return f;
}

namespace kern {

// out(.., i, ..) = sum_j M(i,j) in(.., j, ..) along the given axis.
// M is row-major n x n.  Every output cell is independent, so the OpenMP
// variant is bit-identical to the serial one.
template <class T>
void apply_axis_serial(const Tensor<T>& in, const std::vector<double>& m, int axis, Tensor<T>& out);
template <class T>
void apply_axis_omp(const Tensor<T>& in, const std::vector<double>& m, int axis, Tensor<T>& out);
template <class T>
Tensor<T> apply_axis(const Tensor<T>& in, const std::vector<double>& m, int axis);

// Contract one axis against nodal weights; result has axes-1 axes.
template <class T>
void contract_axis_serial(const Tensor<T>& in, const std::vector<double>& w, int axis, Tensor<T>& out);
template <class T>
void contract_axis_omp(const Tensor<T>& in, const std::vector<double>& w, int axis, Tensor<T>& out);
template <class T>
Tensor<T> contract_axis(const Tensor<T>& in, const std::vector<double>& w, int axis);

// sum over all tuples t of prod_k w(t_k) * gamma(t) * sum_{i<j} c(t_i, t_j).
// Reduction is organized as one partial per leading index combined serially,
// so the parallel result is bit-identical to the serial one.
double pair_cost_sum_serial(const DTensor& gamma, const std::vector<double>& cost,
                            const std::vector<double>& w);
double pair_cost_sum_omp(const DTensor& gamma, const std::vector<double>& cost,
                         const std::vector<double>& w);
double pair_cost_sum(const DTensor& gamma, const std::vector<double>& cost,
                     const std::vector<double>& w);

// sum over all tuples of prod_k w(t_k) * f(gamma(t)) for f = |.|^2 (norms)
double weighted_norm2_serial(const CTensor& a, const std::vector<double>& w);
double weighted_norm2_omp(const CTensor& a, const std::vector<double>& w);
double weighted_norm2(const CTensor& a, const std::vector<double>& w);
double weighted_sum_serial(const DTensor& a, const std::vector<double>& w);
double weighted_sum_omp(const DTensor& a, const std::vector<double>& w);
double weighted_sum(const DTensor& a, const std::vector<double>& w);

}  // namespace kern

// Reorders axes: out(x_1,..,x_N) = in(x_{perm[1]},..,x_{perm[N]}).
template <class T>
Tensor<T> permute_axes(const Tensor<T>& in, const std::vector<int>& perm);

// Product of nodal weights over a tuple.
double tuple_weight(const std::vector<double>& w, int axes, const int* idx);

}  // namespace sce
