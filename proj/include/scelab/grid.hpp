#pragma once

#include <vector>

#include "scelab/common.hpp"

namespace sce {

// Uniform 1-d grid with per-node quadrature weights.  make_grid uses the
// trapezoid rule (weight h, halved at the endpoints); make_grid_unit_weights
// assigns weight 1 to every node, which treats nodal values as point masses.
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    int n = 0;
    double h = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    bool same_as(const Grid1D& o) const {
        return n == o.n && a == o.a && b == o.b && weights == o.weights;
    }
};

Grid1D make_grid(double a, double b, int n);
Grid1D make_grid_unit_weights(double a, double b, int n);

double quadrature(const Grid1D& g, const std::vector<double>& values);

// Centered differences in the interior, one-sided at the boundary.
std::vector<double> gradient_fd(const Grid1D& g, const std::vector<double>& values);
// Same operator as a dense n x n matrix (row-major), for tensor-axis application.
std::vector<double> gradient_matrix(const Grid1D& g);

// Discrete approximate identity: nonnegative offset weights summing to one,
// symmetric about offset zero.  Gaussian of width epsilon, truncated at
// 6*epsilon and renormalized.
struct MollifierKernel {
    double epsilon = 0.0;
    int radius = 0;                 // offsets run over [-radius, radius]
    std::vector<double> weights;    // size 2*radius+1
};

MollifierKernel gaussian_mollifier(double epsilon, const Grid1D& g);

// One-body smoothing matrix S (row-major n x n), with the source-node
// quadrature weight folded in so plain matrix action realizes the integral
// operator.  Columns satisfy sum_i w_i S(i,j) = w_j; applying S along every
// axis of a plan then preserves total mass exactly and commutes with taking
// marginals.
std::vector<double> smoothing_matrix(const MollifierKernel& k, const Grid1D& g);

}  // namespace sce
