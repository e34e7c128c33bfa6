#pragma once

#include "porohdg/common.hpp"

#include <optional>
#include <string>

namespace porohdg {

/// Symmetric 2x2 tensor.
struct SymTensor {
    double xx = 0.0;
    double yy = 0.0;
    double xy = 0.0;

    double trace() const { return xx + yy; }
    /// Component-wise product sigma : tau.
    double dot(const SymTensor& o) const { return xx * o.xx + yy * o.yy + 2.0 * xy * o.xy; }
    Eigen::Matrix2d matrix() const { return (Eigen::Matrix2d() << xx, xy, xy, yy).finished(); }
    /// Mandel vector (xx, yy, sqrt(2) xy): Euclidean dot equals sigma : tau.
    Eigen::Vector3d mandel() const;
    static SymTensor from_mandel(const Eigen::Vector3d& m);

    SymTensor operator+(const SymTensor& o) const { return {xx + o.xx, yy + o.yy, xy + o.xy}; }
    SymTensor operator-(const SymTensor& o) const { return {xx - o.xx, yy - o.yy, xy - o.xy}; }
    SymTensor operator*(double s) const { return {xx * s, yy * s, xy * s}; }
};

/// Physical data from which densities and mobility resistance can be derived.
struct PoroProvenance {
    double rho_s = 0.0;  ///< solid density
    double rho_f = 0.0;  ///< fluid density
    double phi = 0.0;    ///< porosity
    double nu = 0.0;     ///< tortuosity
    double eta = 0.0;    ///< dynamic viscosity
    double kappa = 0.0;  ///< permeability
};

struct MaterialParams {
    double rho11 = 0.0;
    double rho12 = 0.0;
    double rho22 = 0.0;
    double mu = 0.0;
    double lambda = 0.0;
    double s = 0.0;  ///< constrained specific storage
    double alpha = 0.0;
    double beta = 0.0;  ///< eta / kappa
    std::optional<PoroProvenance> provenance;

    /// Densities and beta from the physical data.
    static MaterialParams from_provenance(const PoroProvenance& p, double mu, double lambda, double s,
                                          double alpha);

    /// Throws ValidationError naming the offending `material.<key>`.
    void validate() const;

    Eigen::Matrix2d density() const { return (Eigen::Matrix2d() << rho11, rho12, rho12, rho22).finished(); }
    /// Eigenvalues (rho-, rho+) of the density matrix.
    std::pair<double, double> density_bounds() const;
    /// Constants a-, a+ bounding (A tau, tau) + (s q, q) against the L2 norms.
    std::pair<double, double> compliance_bounds() const;

    /// Compliance A in Mandel form (3x3, symmetric positive definite).
    Eigen::Matrix3d compliance_mandel() const;
};

/// C eps = 2 mu eps + lambda tr(eps) I.
SymTensor apply_C(const SymTensor& eps, const MaterialParams& m);
/// A sigma = (sigma - lambda / (2 mu + 2 lambda) tr(sigma) I) / (2 mu).
SymTensor apply_A(const SymTensor& sigma, const MaterialParams& m);

struct WaveSpeeds {
    double c_s = 0.0;
    double c_p1 = 0.0;  ///< fast compressional
    double c_p2 = 0.0;  ///< slow compressional
};

/// Shear speed sqrt(mu / rho_s) and compressional speeds from B w = gamma R w.
/// Needs the provenance data (rho_s).
WaveSpeeds wave_speeds(const MaterialParams& m);

/// Named parameter sets: "L1", "L2" (near-incompressible) and "coeffs"
/// (wave benchmark; `eta` sets the viscosity).
MaterialParams material_preset(const std::string& name, double eta = 0.0);

}  // namespace porohdg
