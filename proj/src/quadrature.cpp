#include "porohdg/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace porohdg {

void gauss_legendre(int npoints, std::vector<double>& nodes, std::vector<double>& weights)
{
    if (npoints < 1) throw ValidationError("gauss_legendre needs at least one point");
    const int n = npoints;
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int m = 2; m <= n; ++m) {
                const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int m = 2; m <= n; ++m) {
            const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1, 1] -> [0, 1], ascending order
        nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
        nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
        weights[static_cast<std::size_t>(i)] = 0.5 * w;
        weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
    }
}

QuadratureRule quadrature_edge(int order)
{
    if (order < 0) throw ValidationError("quadrature order must be non-negative");
    const int n = order / 2 + 1;
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    QuadratureRule rule;
    rule.exactness_degree = 2 * n - 1;
    for (int i = 0; i < n; ++i) {
        rule.points.emplace_back(x[static_cast<std::size_t>(i)], 0.0);
        rule.weights.push_back(w[static_cast<std::size_t>(i)]);
    }
    return rule;
}

QuadratureRule quadrature_triangle(int order)
{
    if (order < 0) throw ValidationError("quadrature order must be non-negative");
    // the Jacobian (1 - v) raises the degree in v by one
    const int n = (order + 2) / 2 + ((order + 2) % 2);
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    QuadratureRule rule;
    rule.exactness_degree = 2 * n - 2;
    for (int j = 0; j < n; ++j) {
        const double v = x[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) {
            const double u = x[static_cast<std::size_t>(i)];
            rule.points.emplace_back(u * (1.0 - v), v);
            rule.weights.push_back(w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] * (1.0 - v));
        }
    }
    return rule;
}

}  // namespace porohdg
