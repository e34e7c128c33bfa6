#pragma once

#include "porohdg/common.hpp"

#include <vector>

namespace porohdg {

/// Quadrature on the reference triangle {x, y >= 0, x + y <= 1} (weights sum
/// to 1/2) or on the reference edge [0, 1] (weights sum to 1). For edge rules
/// only the x coordinate of each point is used.
struct QuadratureRule {
    std::vector<Point> points;
    std::vector<double> weights;
    int exactness_degree = 0;

    std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int npoints, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss-Legendre on [0, 1] with ceil((order + 1) / 2) points.
QuadratureRule quadrature_edge(int order);

/// Tensor Gauss rule pulled back through the collapsed (Duffy) map
/// (u, v) -> (u (1 - v), v); all weights are positive.
QuadratureRule quadrature_triangle(int order);

}  // namespace porohdg
