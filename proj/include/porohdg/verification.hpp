#pragma once

#include "porohdg/transient.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace porohdg {

/// Closed-form solution on the unit square:
///   p = sin(pi x y) cos t,  d = (x cos(pi y) cos t, y sin(pi x) sin t),
///   u_s = d', sigma = C eps(d),
/// with u_f the time-periodic particular solution of the Darcy balance with
/// F_f = 0, and F_s, g obtained by substitution.
class ManufacturedSolution {
public:
    /// Throws ValidationError when beta = rho22 = 0.
    explicit ManufacturedSolution(const MaterialParams& params);

    const MaterialParams& params() const { return params_; }

    double p(const Point& x, double t) const;
    Vec2 grad_p(const Point& x, double t) const;
    double dp_dt(const Point& x, double t) const;
    Vec2 displacement(const Point& x, double t) const;
    Vec2 us(const Point& x, double t) const;
    /// Rows are components: (d_x us_x, d_y us_x; d_x us_y, d_y us_y).
    Eigen::Matrix2d grad_us(const Point& x, double t) const;
    Vec2 dus_dt(const Point& x, double t) const;
    double div_us(const Point& x, double t) const;
    Vec2 uf(const Point& x, double t) const;
    Vec2 duf_dt(const Point& x, double t) const;
    double div_uf(const Point& x, double t) const;
    SymTensor sigma(const Point& x, double t) const;
    Vec2 div_sigma(const Point& x, double t) const;

    Vec2 Fs(const Point& x, double t) const;
    Vec2 Ff(const Point&, double) const { return Vec2::Zero(); }
    double g(const Point& x, double t) const;

    AnalyticFields fields() const;
    Source source() const;
    /// Solid Dirichlet and fluid velocity (full vector, or normal component
    /// only when `fluid_normal_only`) on every boundary tag.
    BoundaryConditions boundary_conditions(const Skeleton& skeleton, bool fluid_normal_only = false) const;

private:
    MaterialParams params_;
    double det_ = 0.0;  ///< beta^2 + rho22^2

    // Known part of the Darcy balance, G_c cos t + G_s sin t.
    Vec2 gc(const Point& x) const;
    Vec2 gs(const Point& x) const;
    double div_gc(const Point& x) const;
    double div_gs(const Point& x) const;
};

struct ErrorNorms {
    double sigma_p = 0.0;  ///< ||(sigma, p) - (sigma_h, p_h)||_H2
    double u = 0.0;        ///< ||u - u_h||_H1
};

/// Weighted error norms of `state` against exact fields evaluated at `t`,
/// with quadrature of order `order` (default: six above the load order).
ErrorNorms error_norms(const HdgModel& model, const DGState& state, const AnalyticFields& exact, double t,
                       int order = -1);

/// Observed rate log(e_coarse / e_fine) / log(ratio).
double observed_rate(double e_coarse, double e_fine, double ratio);

struct StudyRow {
    int level = 0;
    double h = 0.0;
    double dt = 0.0;
    int k = 0;
    ErrorNorms err;
    double rate_sigma_p = 0.0;  ///< NaN on the first row
    double rate_u = 0.0;
};

struct StudyResult {
    std::string kind;  ///< "h", "dt" or "p"
    std::vector<StudyRow> rows;
    std::vector<std::string> warnings;

    double mean_rate_sigma_p() const;
    double mean_rate_u() const;
    /// `level,h,dt,k,err_sigma_p,err_u,rate_sigma_p,rate_u` with header.
    std::string csv() const;
};

/// One manufactured-solution run on `mesh` from t = 0 to T in L steps.
struct ManufacturedRunOptions {
    int k = 1;
    double T = 0.3;
    int steps = 20;
    bool fluid_normal_only = false;
};
ErrorNorms run_manufactured(std::shared_ptr<const Mesh> mesh, const MaterialParams& params,
                            const ManufacturedRunOptions& opt);

/// Steps for the spatial studies: dt = c h^{(k+2)/2}, c chosen so the
/// coarsest level takes `min_steps` steps.
int steps_for_level(double T, double h, double h_coarse, int k, int min_steps = 20);

/// Structured meshes n = n0, 2 n0, ... (`levels` of them) on the unit square.
StudyResult h_study(int k, const MaterialParams& params, int n0, int levels, double T = 0.3, int min_steps = 20,
                    bool fluid_normal_only = false);
/// Fixed mesh n x n and degree k, step counts `steps` to final time T. The
/// spatial error floor is estimated with 4x the finest step count.
StudyResult dt_study(int n, int k, const MaterialParams& params, const std::vector<int>& steps, double T = 1.0,
                     bool fluid_normal_only = false);
/// Fixed mesh n x n and time step dt, degrees ks.
StudyResult p_study(int n, const MaterialParams& params, const std::vector<int>& ks, double dt, double T = 0.3,
                    bool fluid_normal_only = false);

/// Random polynomial solution that the discrete space reproduces exactly:
/// sigma, p of degree k and u_s, u_f of degree k+1 in space, all affine in
/// time, with u_s = u0 + t r (r a rigid motion) and sigma = sigma0 + t C eps(u0)
/// so that A sigma' = eps(u_s) holds pointwise.
class PatchSolution {
public:
    PatchSolution(const MaterialParams& params, int k, std::uint64_t seed);

    AnalyticFields fields() const;
    Source source() const;
    /// Solid Dirichlet and full fluid velocity on every boundary tag.
    BoundaryConditions boundary_conditions(const Skeleton& skeleton) const;

    struct Poly {
        int degree = 0;
        std::vector<double> c;  ///< coefficients of x^i y^j, i + j <= degree
        double value(const Point& x) const;
        /// d^{a+b} / dx^a dy^b
        double derivative(const Point& x, int a, int b) const;
    };

private:
    MaterialParams params_;
    std::array<Poly, 2> us0_, uf0_, uf1_;
    std::array<Poly, 3> sigma0_;
    Poly p0_, p1_;
    Eigen::Vector3d rigid_;  ///< (a, b, c): r = (a - c y, b + c x)

    Vec2 us(const Point& x, double t) const;
    Vec2 uf(const Point& x, double t) const;
    SymTensor sigma(const Point& x, double t) const;
    double p(const Point& x, double t) const;
};

/// Errors of the element and face L2 projections of the manufactured fields
/// at time t.
struct ProjectionErrors {
    /// ||q - P q||_T + ||h_F^{1/2} / (k+1) (q - P q)||_{dT}, q ranging over
    /// the components of sigma and p, P onto degree k.
    double element = 0.0;
    /// (||eps(e_s)||^2 + ||div e_f||^2 + ||(k+1) h_F^{-1/2} (P_F u - P_T u)||^2_{dT})^{1/2}
    /// for u = (u_s, u_f), e = u - P_T u, projections onto degree k+1.
    double combined = 0.0;
};

ProjectionErrors projection_errors(const Mesh& mesh, int k, const ManufacturedSolution& exact, double t);

/// Smallest C with ||h_F^{1/2} / (k+1) q||_{dT} <= C ||q||_T for all
/// piecewise P_k functions q (the maximum over elements of a generalized
/// eigenvalue problem).
double discrete_trace_constant(const Mesh& mesh, int k);

/// Unforced run from random volume data with u_s = 0 on the boundary and a
/// pressure-free fluid boundary. Energy must not increase.
struct EnergyTestOptions {
    int n = 4;
    int k = 1;
    int steps = 200;
    double dt = 0.01;
    std::uint64_t seed = 1;
};

struct EnergyTestResult {
    EnergyRecord energy;
    /// max_n (E^{n+1} - E^n) / E^0; nonpositive for a dissipative run.
    double max_relative_increase = 0.0;
};

EnergyTestResult energy_test(const MaterialParams& params, const EnergyTestOptions& opt);

/// Uniform random coefficients in [-1, 1] for every volume unknown, zero traces.
DGState random_state(const HdgModel& model, std::uint64_t seed);

}  // namespace porohdg
