#pragma once

#include "porohdg/basis.hpp"
#include "porohdg/geometry.hpp"

#include <functional>

namespace porohdg {

/// Callback filling `ncomp` values of a field at a physical point.
using FieldEval = std::function<void(const Point&, double*)>;
using ScalarField = std::function<double(const Point&)>;

/// Physical basis on K: phi_i = psi_i(F^{-1} x) / sqrt(det J), orthonormal in L2(K).
inline double element_basis_scale(const ElementGeometry& g) { return 1.0 / std::sqrt(g.det); }
/// Physical face basis: chi_m(s) / sqrt(|F|), orthonormal in L2(F).
inline double face_basis_scale(double length) { return 1.0 / std::sqrt(length); }

/// L2(K) projection onto P_degree; returns coefficients as (basis x ncomp).
Eigen::MatrixXd l2_project_element(const FieldEval& f, int ncomp, int degree, const ElementGeometry& g, int order);
Eigen::VectorXd l2_project_element(const ScalarField& f, int degree, const ElementGeometry& g, int order);

/// L2(F) projection onto P_degree on the segment a -> b (parameter s runs from a to b).
Eigen::MatrixXd l2_project_face(const FieldEval& f, int ncomp, int degree, const Point& a, const Point& b, int order);
Eigen::VectorXd l2_project_face(const ScalarField& f, int degree, const Point& a, const Point& b, int order);

/// Value of an element expansion at a reference point.
double evaluate_element(const Eigen::Ref<const Eigen::VectorXd>& coeffs, int degree, const ElementGeometry& g,
                        const Point& ref);
/// Value of a face expansion at parameter s.
double evaluate_face(const Eigen::Ref<const Eigen::VectorXd>& coeffs, int degree, double length, double s);

}  // namespace porohdg
