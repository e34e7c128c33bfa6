#pragma once

#include "porohdg/mesh.hpp"

#include <array>

namespace porohdg {

/// Affine map from the reference triangle onto a mesh triangle.
struct ElementGeometry {
    std::array<Point, 3> x;
    Eigen::Matrix2d jac;        ///< columns x1 - x0, x2 - x0
    Eigen::Matrix2d jac_inv_t;  ///< pulls reference gradients to physical ones
    double det = 0.0;           ///< 2 |K|

    Point map(const Point& ref) const { return x[0] + jac * ref; }
    Point to_reference(const Point& p) const { return jac.inverse() * (p - x[0]); }
    double area() const { return 0.5 * det; }
    /// Physical point of local edge e at parameter s (local orientation).
    Point edge_point(int e, double s) const { return x[static_cast<std::size_t>(e)] + s * (x[static_cast<std::size_t>((e + 1) % 3)] - x[static_cast<std::size_t>(e)]); }
    /// Outward unit normal of local edge e.
    Point outward_normal(int e) const
    {
        const Point d = x[static_cast<std::size_t>((e + 1) % 3)] - x[static_cast<std::size_t>(e)];
        return Point(d.y(), -d.x()).normalized();
    }
};

inline ElementGeometry element_geometry(const Mesh& mesh, int t)
{
    ElementGeometry g;
    const auto& v = mesh.triangle(t).v;
    for (std::size_t i = 0; i < 3; ++i) g.x[i] = mesh.vertex(v[i]);
    g.jac.col(0) = g.x[1] - g.x[0];
    g.jac.col(1) = g.x[2] - g.x[0];
    g.det = g.jac.determinant();
    g.jac_inv_t = g.jac.inverse().transpose();
    return g;
}

}  // namespace porohdg
