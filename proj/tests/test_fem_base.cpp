#include "porohdg/basis.hpp"
#include "porohdg/projection.hpp"
#include "porohdg/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace porohdg;

namespace {

// Beta-function oracle: integral of x^a y^b over the reference triangle.
double monomial_integral(int a, int b)
{
    return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

double integrate(const QuadratureRule& r, const std::function<double(const Point&)>& f)
{
    double s = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * f(r.points[q]);
    return s;
}

ElementGeometry skewed_triangle()
{
    ElementGeometry g;
    g.x = {Point(0.2, 0.1), Point(1.3, 0.4), Point(0.5, 1.1)};
    g.jac.col(0) = g.x[1] - g.x[0];
    g.jac.col(1) = g.x[2] - g.x[0];
    g.det = g.jac.determinant();
    g.jac_inv_t = g.jac.inverse().transpose();
    return g;
}

}  // namespace

TEST(Quadrature, TriangleExamples)
{
    EXPECT_NEAR(integrate(quadrature_triangle(0), [](const Point&) { return 1.0; }), 0.5, 1e-15);
    EXPECT_NEAR(integrate(quadrature_triangle(1), [](const Point& p) { return p.x(); }), 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(integrate(quadrature_triangle(4), [](const Point& p) { return p.x() * p.x() * p.y() * p.y(); }),
                1.0 / 180.0, 1e-15);
}

TEST(Quadrature, TriangleExactOnMonomials)
{
    for (int order = 0; order <= 24; ++order) {
        const auto r = quadrature_triangle(order);
        EXPECT_GE(r.exactness_degree, order);
        for (double w : r.weights) EXPECT_GT(w, 0.0);
        for (int a = 0; a <= order; ++a) {
            const int b = order - a;
            const double v = integrate(r, [&](const Point& p) { return std::pow(p.x(), a) * std::pow(p.y(), b); });
            EXPECT_NEAR(v, monomial_integral(a, b), 1e-14) << "order " << order << " x^" << a << " y^" << b;
        }
    }
}

TEST(Quadrature, EdgeExamples)
{
    const auto r1 = quadrature_edge(1);
    ASSERT_EQ(r1.size(), 1u);
    EXPECT_DOUBLE_EQ(r1.points[0].x(), 0.5);
    EXPECT_DOUBLE_EQ(r1.weights[0], 1.0);
    EXPECT_NEAR(integrate(quadrature_edge(3), [](const Point& p) { return std::pow(p.x(), 3); }), 0.25, 1e-15);
    EXPECT_NEAR(integrate(quadrature_edge(5), [](const Point& p) { return std::pow(p.x(), 5); }), 1.0 / 6.0, 1e-15);
    for (int order = 0; order <= 30; ++order) {
        const auto r = quadrature_edge(order);
        EXPECT_EQ(static_cast<int>(r.size()), (order + 2) / 2);
        const double v = integrate(r, [&](const Point& p) { return std::pow(p.x(), order); });
        EXPECT_NEAR(v, 1.0 / (order + 1.0), 1e-14);
    }
}

TEST(Basis, OrthonormalAndNested)
{
    for (int l = 0; l <= 10; ++l) {
        const auto r = quadrature_triangle(2 * l);
        const int n = triangle_dim(l);
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
        std::vector<double> v(static_cast<std::size_t>(n));
        for (std::size_t q = 0; q < r.size(); ++q) {
            triangle_basis(l, r.points[q], v.data());
            const Eigen::Map<Eigen::VectorXd> phi(v.data(), n);
            gram += r.weights[q] * phi * phi.transpose();
        }
        EXPECT_LT((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12) << "degree " << l;

        // leading entries agree with the lower-degree basis
        if (l > 0) {
            const Point p(0.21, 0.37);
            std::vector<double> lo(static_cast<std::size_t>(triangle_dim(l - 1)));
            triangle_basis(l, p, v.data());
            triangle_basis(l - 1, p, lo.data());
            for (std::size_t i = 0; i < lo.size(); ++i) EXPECT_NEAR(v[i], lo[i], 1e-13);
        }
    }
}

TEST(Basis, EdgeOrthonormal)
{
    for (int l = 0; l <= 10; ++l) {
        const auto r = quadrature_edge(2 * l);
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(l + 1, l + 1);
        std::vector<double> v(static_cast<std::size_t>(l + 1));
        for (std::size_t q = 0; q < r.size(); ++q) {
            edge_basis(l, r.points[q].x(), v.data());
            const Eigen::Map<Eigen::VectorXd> phi(v.data(), l + 1);
            gram += r.weights[q] * phi * phi.transpose();
        }
        EXPECT_LT((gram - Eigen::MatrixXd::Identity(l + 1, l + 1)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Basis, GradientsMatchFiniteDifferences)
{
    const int l = 6;
    const int n = triangle_dim(l);
    const double h = 1e-6;
    std::vector<double> v(n), dx(n), dy(n), vp(n), vm(n);
    for (const Point& p : {Point(0.2, 0.3), Point(0.05, 0.9), Point(0.6, 0.1)}) {
        triangle_basis(l, p, v.data(), dx.data(), dy.data());
        triangle_basis(l, p + Point(h, 0), vp.data());
        triangle_basis(l, p - Point(h, 0), vm.data());
        for (int i = 0; i < n; ++i) EXPECT_NEAR(dx[i], (vp[i] - vm[i]) / (2 * h), 1e-6 * (1 + std::abs(dx[i])));
        triangle_basis(l, p + Point(0, h), vp.data());
        triangle_basis(l, p - Point(0, h), vm.data());
        for (int i = 0; i < n; ++i) EXPECT_NEAR(dy[i], (vp[i] - vm[i]) / (2 * h), 1e-6 * (1 + std::abs(dy[i])));
    }
}

TEST(Basis, TraceTabulationFollowsEdge)
{
    const int l = 3;
    const auto t = trace_tabulation(l, 2 * l + 1, 1, false);
    const auto tr = trace_tabulation(l, 2 * l + 1, 1, true);
    const auto nq = static_cast<Eigen::Index>(t->rule.size());
    // reversed tabulation visits the same points backwards
    for (Eigen::Index q = 0; q < nq; ++q) {
        EXPECT_LT((t->values.row(q) - tr->values.row(nq - 1 - q)).cwiseAbs().maxCoeff(), 1e-13);
    }
    EXPECT_TRUE(reference_edge_point(0, 0.0, false).isApprox(Point(0, 0)));
    EXPECT_TRUE(reference_edge_point(1, 0.0, false).isApprox(Point(1, 0)));
    EXPECT_TRUE(reference_edge_point(2, 1.0, false).isApprox(Point(0, 0)));
    EXPECT_TRUE(reference_edge_point(1, 0.0, true).isApprox(Point(0, 1)));
}

TEST(Projection, ReproducesPolynomials)
{
    const ElementGeometry g = skewed_triangle();
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int l = 0; l <= 5; ++l) {
        std::vector<double> c(static_cast<std::size_t>(triangle_dim(l)));
        for (auto& x : c) x = u(rng);
        auto poly = [&](const Point& p) {
            double s = 0.0;
            std::size_t i = 0;
            for (int d = 0; d <= l; ++d) {
                for (int a = 0; a <= d; ++a) s += c[i++] * std::pow(p.x(), a) * std::pow(p.y(), d - a);
            }
            return s;
        };
        const Eigen::VectorXd coef = l2_project_element(poly, l, g, 2 * l + 2);
        for (const Point& ref : {Point(0.1, 0.1), Point(0.7, 0.2), Point(0.3, 0.6)}) {
            EXPECT_NEAR(evaluate_element(coef, l, g, ref), poly(g.map(ref)), 1e-12);
        }
        // coefficient round trip
        const Eigen::VectorXd again =
            l2_project_element([&](const Point& p) { return evaluate_element(coef, l, g, g.to_reference(p)); }, l, g,
                               2 * l + 2);
        EXPECT_LT((again - coef).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Projection, DegreeZeroIsMeanValue)
{
    const ElementGeometry g = skewed_triangle();
    auto f = [](const Point& p) { return std::sin(std::numbers::pi * p.x() * p.y()); };
    // oracle: high-order rule on the mapped triangle
    const auto r = quadrature_triangle(40);
    double integral = 0.0;
    for (std::size_t q = 0; q < r.size(); ++q) integral += r.weights[q] * g.det * f(g.map(r.points[q]));
    const Eigen::VectorXd c = l2_project_element(f, 0, g, 20);
    EXPECT_NEAR(evaluate_element(c, 0, g, Point(0.3, 0.3)), integral / g.area(), 1e-13);
}

TEST(Projection, LinearInTheField)
{
    const ElementGeometry g = skewed_triangle();
    auto f1 = [](const Point& p) { return std::exp(p.x()) * p.y(); };
    auto f2 = [](const Point& p) { return std::cos(3 * p.x() + p.y()); };
    const Eigen::VectorXd a = l2_project_element(f1, 3, g, 12);
    const Eigen::VectorXd b = l2_project_element(f2, 3, g, 12);
    const Eigen::VectorXd ab =
        l2_project_element([&](const Point& p) { return 2.0 * f1(p) - 0.5 * f2(p); }, 3, g, 12);
    EXPECT_LT((ab - (2.0 * a - 0.5 * b)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Projection, FaceConstantAndPolynomial)
{
    const Point a(0.3, 0.2), b(1.1, 0.8);
    const double len = (b - a).norm();
    const Eigen::VectorXd c = l2_project_face([](const Point&) { return 2.5; }, 2, a, b, 6);
    EXPECT_NEAR(c[0], 2.5 * std::sqrt(len), 1e-13);
    EXPECT_NEAR(c[1], 0.0, 1e-13);
    for (double s : {0.0, 0.4, 1.0}) EXPECT_NEAR(evaluate_face(c, 2, len, s), 2.5, 1e-13);

    auto cubic = [](const Point& p) { return 1.0 + p.x() - 2.0 * p.y() * p.y() + p.x() * p.x() * p.x(); };
    const Eigen::VectorXd cc = l2_project_face(cubic, 3, a, b, 8);
    for (double s : {0.0, 0.25, 0.8}) EXPECT_NEAR(evaluate_face(cc, 3, len, s), cubic(a + s * (b - a)), 1e-12);
}
