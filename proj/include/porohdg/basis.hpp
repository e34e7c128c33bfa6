#pragma once

#include "porohdg/common.hpp"
#include "porohdg/quadrature.hpp"

#include <memory>

namespace porohdg {

/// dim P_l on a triangle.
constexpr int triangle_dim(int degree) { return (degree + 1) * (degree + 2) / 2; }
/// dim P_l on an edge.
constexpr int edge_dim(int degree) { return degree + 1; }

/// Orthonormal (Koornwinder/Dubiner) basis of P_l on the reference triangle.
/// Functions are ordered by total degree, so the first triangle_dim(m)
/// entries span P_m for every m <= l.
///
/// Writes values (size triangle_dim(l)) and, when non-null, x/y derivatives.
void triangle_basis(int degree, const Point& ref, double* values, double* dx = nullptr, double* dy = nullptr);

/// Orthonormal Legendre basis of P_l on [0, 1].
void edge_basis(int degree, double s, double* values);

/// Values and reference gradients of a basis at the points of a rule.
/// Rows are points, columns are basis functions.
struct BasisTabulation {
    int degree = 0;
    QuadratureRule rule;
    Eigen::MatrixXd values;
    Eigen::MatrixXd dx;
    Eigen::MatrixXd dy;
};

/// Triangle basis of `degree` at the triangle rule of `order` (cached).
std::shared_ptr<const BasisTabulation> volume_tabulation(int degree, int order);

/// Triangle basis of `degree` at the points of the edge rule of `order`
/// mapped onto local edge `edge` (from local vertex edge to edge+1), or onto
/// the reversed edge when `reversed` (cached).
std::shared_ptr<const BasisTabulation> trace_tabulation(int degree, int order, int edge, bool reversed);

/// Edge basis of `degree` at the edge rule of `order` (cached).
std::shared_ptr<const BasisTabulation> edge_tabulation(int degree, int order);

/// Reference point of local edge e at parameter s in [0, 1].
Point reference_edge_point(int edge, double s, bool reversed);

}  // namespace porohdg
