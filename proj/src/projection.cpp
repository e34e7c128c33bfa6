#include "porohdg/projection.hpp"

#include <vector>

namespace porohdg {

Eigen::MatrixXd l2_project_element(const FieldEval& f, int ncomp, int degree, const ElementGeometry& g, int order)
{
    const auto tab = volume_tabulation(degree, order);
    const int nb = triangle_dim(degree);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nb, ncomp);
    std::vector<double> val(static_cast<std::size_t>(ncomp));
    const double scale = element_basis_scale(g) * g.det;
    for (std::size_t q = 0; q < tab->rule.size(); ++q) {
        f(g.map(tab->rule.points[q]), val.data());
        const double w = tab->rule.weights[q] * scale;
        for (int m = 0; m < ncomp; ++m) {
            c.col(m) += (w * val[static_cast<std::size_t>(m)]) * tab->values.row(static_cast<Eigen::Index>(q)).transpose();
        }
    }
    return c;
}

Eigen::VectorXd l2_project_element(const ScalarField& f, int degree, const ElementGeometry& g, int order)
{
    return l2_project_element([&](const Point& p, double* out) { out[0] = f(p); }, 1, degree, g, order).col(0);
}

Eigen::MatrixXd l2_project_face(const FieldEval& f, int ncomp, int degree, const Point& a, const Point& b, int order)
{
    const auto tab = edge_tabulation(degree, order);
    const double length = (b - a).norm();
    const int nb = edge_dim(degree);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nb, ncomp);
    std::vector<double> val(static_cast<std::size_t>(ncomp));
    const double scale = face_basis_scale(length) * length;
    for (std::size_t q = 0; q < tab->rule.size(); ++q) {
        const double s = tab->rule.points[q].x();
        f(a + s * (b - a), val.data());
        const double w = tab->rule.weights[q] * scale;
        for (int m = 0; m < ncomp; ++m) {
            c.col(m) += (w * val[static_cast<std::size_t>(m)]) * tab->values.row(static_cast<Eigen::Index>(q)).transpose();
        }
    }
    return c;
}

Eigen::VectorXd l2_project_face(const ScalarField& f, int degree, const Point& a, const Point& b, int order)
{
    return l2_project_face([&](const Point& p, double* out) { out[0] = f(p); }, 1, degree, a, b, order).col(0);
}

double evaluate_element(const Eigen::Ref<const Eigen::VectorXd>& coeffs, int degree, const ElementGeometry& g,
                        const Point& ref)
{
    std::vector<double> v(static_cast<std::size_t>(triangle_dim(degree)));
    triangle_basis(degree, ref, v.data());
    double s = 0.0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) s += coeffs[i] * v[static_cast<std::size_t>(i)];
    return s * element_basis_scale(g);
}

double evaluate_face(const Eigen::Ref<const Eigen::VectorXd>& coeffs, int degree, double length, double s)
{
    std::vector<double> v(static_cast<std::size_t>(edge_dim(degree)));
    edge_basis(degree, s, v.data());
    double r = 0.0;
    for (Eigen::Index i = 0; i < coeffs.size(); ++i) r += coeffs[i] * v[static_cast<std::size_t>(i)];
    return r * face_basis_scale(length);
}

}  // namespace porohdg
