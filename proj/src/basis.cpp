#include "porohdg/basis.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace porohdg {

namespace {

// Jacobi P_n^{(a,0)}(x) and its derivative for n = 0..nmax.
void jacobi(int nmax, double a, double x, std::vector<double>& p, std::vector<double>& dp)
{
    p.assign(static_cast<std::size_t>(nmax + 1), 0.0);
    dp.assign(static_cast<std::size_t>(nmax + 1), 0.0);
    p[0] = 1.0;
    if (nmax == 0) return;
    p[1] = 0.5 * ((a + 2.0) * x + a);
    dp[1] = 0.5 * (a + 2.0);
    for (int n = 2; n <= nmax; ++n) {
        const double c = 2.0 * n + a;
        const double a1 = 2.0 * n * (n + a) * (c - 2.0);
        const double a2 = (c - 1.0) * a * a;
        const double a3 = (c - 1.0) * c * (c - 2.0);
        const double a4 = 2.0 * (n + a - 1.0) * (n - 1.0) * c;
        const auto i = static_cast<std::size_t>(n);
        p[i] = ((a2 + a3 * x) * p[i - 1] - a4 * p[i - 2]) / a1;
        dp[i] = ((a2 + a3 * x) * dp[i - 1] + a3 * p[i - 1] - a4 * dp[i - 2]) / a1;
    }
}

}  // namespace

void triangle_basis(int degree, const Point& ref, double* values, double* dx, double* dy)
{
    const double x = ref.x(), y = ref.y();
    const double t = 1.0 - y;
    const double s = 2.0 * x + y - 1.0;
    const auto nq = static_cast<std::size_t>(degree + 1);

    // Q_i = P_i(a) t^i with a = s / t, built without dividing by t
    std::vector<double> q(nq), qx(nq), qy(nq);
    q[0] = 1.0;
    qx[0] = qy[0] = 0.0;
    if (degree >= 1) {
        q[1] = s;
        qx[1] = 2.0;
        qy[1] = 1.0;
    }
    for (std::size_t n = 1; n + 1 < nq; ++n) {
        const double c1 = (2.0 * n + 1.0) / (n + 1.0);
        const double c2 = static_cast<double>(n) / (n + 1.0);
        q[n + 1] = c1 * s * q[n] - c2 * t * t * q[n - 1];
        qx[n + 1] = c1 * (2.0 * q[n] + s * qx[n]) - c2 * t * t * qx[n - 1];
        qy[n + 1] = c1 * (q[n] + s * qy[n]) - c2 * (-2.0 * t * q[n - 1] + t * t * qy[n - 1]);
    }

    const double b = 2.0 * y - 1.0;
    std::vector<double> pj, dpj;
    int idx = 0;
    for (int n = 0; n <= degree; ++n) {
        for (int i = n; i >= 0; --i) {
            const int j = n - i;
            jacobi(j, 2.0 * i + 1.0, b, pj, dpj);
            const double norm = std::sqrt(2.0 * (2.0 * i + 1.0) * (i + j + 1.0));
            const auto ii = static_cast<std::size_t>(i);
            const auto jj = static_cast<std::size_t>(j);
            values[idx] = norm * q[ii] * pj[jj];
            if (dx) dx[idx] = norm * qx[ii] * pj[jj];
            if (dy) dy[idx] = norm * (qy[ii] * pj[jj] + q[ii] * 2.0 * dpj[jj]);
            ++idx;
        }
    }
}

void edge_basis(int degree, double s, double* values)
{
    const double x = 2.0 * s - 1.0;
    double p0 = 1.0, p1 = x;
    values[0] = 1.0;
    if (degree >= 1) values[1] = std::sqrt(3.0) * x;
    for (int n = 1; n < degree; ++n) {
        const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
        values[n + 1] = std::sqrt(2.0 * n + 3.0) * p2;
    }
}

Point reference_edge_point(int edge, double s, bool reversed)
{
    static const Point corners[3] = {Point(0.0, 0.0), Point(1.0, 0.0), Point(0.0, 1.0)};
    const Point& a = corners[edge];
    const Point& b = corners[(edge + 1) % 3];
    return reversed ? Point(b + s * (a - b)) : Point(a + s * (b - a));
}

namespace {

std::shared_ptr<BasisTabulation> tabulate_triangle(int degree, QuadratureRule rule)
{
    auto tab = std::make_shared<BasisTabulation>();
    tab->degree = degree;
    const int nb = triangle_dim(degree);
    const auto np = static_cast<Eigen::Index>(rule.size());
    tab->values.resize(np, nb);
    tab->dx.resize(np, nb);
    tab->dy.resize(np, nb);
    std::vector<double> v(static_cast<std::size_t>(nb)), gx(v.size()), gy(v.size());
    for (Eigen::Index q = 0; q < np; ++q) {
        triangle_basis(degree, rule.points[static_cast<std::size_t>(q)], v.data(), gx.data(), gy.data());
        for (int i = 0; i < nb; ++i) {
            tab->values(q, i) = v[static_cast<std::size_t>(i)];
            tab->dx(q, i) = gx[static_cast<std::size_t>(i)];
            tab->dy(q, i) = gy[static_cast<std::size_t>(i)];
        }
    }
    tab->rule = std::move(rule);
    return tab;
}

template <class Key>
class Cache {
public:
    template <class Make>
    std::shared_ptr<const BasisTabulation> get(const Key& key, Make&& make)
    {
        std::lock_guard lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
        auto tab = make();
        entries_.emplace(key, tab);
        return tab;
    }

private:
    std::mutex mutex_;
    std::map<Key, std::shared_ptr<const BasisTabulation>> entries_;
};

}  // namespace

std::shared_ptr<const BasisTabulation> volume_tabulation(int degree, int order)
{
    static Cache<std::pair<int, int>> cache;
    return cache.get({degree, order}, [&] { return tabulate_triangle(degree, quadrature_triangle(order)); });
}

std::shared_ptr<const BasisTabulation> trace_tabulation(int degree, int order, int edge, bool reversed)
{
    static Cache<std::tuple<int, int, int, bool>> cache;
    return cache.get({degree, order, edge, reversed}, [&] {
        QuadratureRule rule = quadrature_edge(order);
        QuadratureRule mapped = rule;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            mapped.points[q] = reference_edge_point(edge, rule.points[q].x(), reversed);
        }
        return tabulate_triangle(degree, std::move(mapped));
    });
}

std::shared_ptr<const BasisTabulation> edge_tabulation(int degree, int order)
{
    static Cache<std::pair<int, int>> cache;
    return cache.get({degree, order}, [&] {
        auto tab = std::make_shared<BasisTabulation>();
        tab->degree = degree;
        tab->rule = quadrature_edge(order);
        const int nb = edge_dim(degree);
        tab->values.resize(static_cast<Eigen::Index>(tab->rule.size()), nb);
        std::vector<double> v(static_cast<std::size_t>(nb));
        for (std::size_t q = 0; q < tab->rule.size(); ++q) {
            edge_basis(degree, tab->rule.points[q].x(), v.data());
            for (int i = 0; i < nb; ++i) tab->values(static_cast<Eigen::Index>(q), i) = v[static_cast<std::size_t>(i)];
        }
        return tab;
    });
}

}  // namespace porohdg
