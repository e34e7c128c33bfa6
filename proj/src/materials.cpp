#include "porohdg/materials.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace porohdg {

namespace {
constexpr double sqrt2 = 1.4142135623730951;

void require(bool ok, const char* key, const std::string& why)
{
    if (!ok) throw ValidationError(std::string("material.") + key + ": " + why);
}
}  // namespace

Eigen::Vector3d SymTensor::mandel() const { return {xx, yy, sqrt2 * xy}; }

SymTensor SymTensor::from_mandel(const Eigen::Vector3d& m) { return {m[0], m[1], m[2] / sqrt2}; }

MaterialParams MaterialParams::from_provenance(const PoroProvenance& p, double mu, double lambda, double s,
                                               double alpha)
{
    MaterialParams m;
    m.rho11 = p.phi * p.rho_f + (1.0 - p.phi) * p.rho_s;
    m.rho12 = p.rho_f;
    m.rho22 = p.nu / p.phi * p.rho_f;
    m.mu = mu;
    m.lambda = lambda;
    m.s = s;
    m.alpha = alpha;
    m.beta = p.kappa > 0.0 ? p.eta / p.kappa : 0.0;
    m.provenance = p;
    return m;
}

void MaterialParams::validate() const
{
    auto finite = [](double v) { return std::isfinite(v); };
    require(finite(rho11) && rho11 > 0.0, "rho11", "must be positive");
    require(finite(rho12), "rho12", "must be finite");
    require(finite(rho22), "rho22", "must be finite");
    require(rho11 * rho22 - rho12 * rho12 > 0.0, "rho22", "density matrix must be positive definite");
    require(finite(mu) && mu > 0.0, "mu", "must be positive");
    require(finite(lambda) && lambda >= 0.0, "lambda", "must be non-negative");
    require(finite(s) && s > 0.0, "s", "must be positive");
    require(finite(alpha) && alpha > 0.0 && alpha <= 1.0, "alpha", "must lie in (0, 1]");
    require(finite(beta) && beta >= 0.0, "beta", "must be non-negative");
    if (provenance) {
        const auto& p = *provenance;
        require(p.rho_s > 0.0, "rho_s", "must be positive");
        require(p.rho_f > 0.0, "rho_f", "must be positive");
        require(p.phi > 0.0 && p.phi < 1.0, "phi", "must lie in (0, 1)");
        require(p.nu > 0.0, "nu", "must be positive");
        require(p.eta >= 0.0, "eta", "must be non-negative");
        require(p.kappa > 0.0, "kappa", "must be positive");
        auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); };
        require(close(rho11, p.phi * p.rho_f + (1.0 - p.phi) * p.rho_s), "rho11", "inconsistent with rho_s/rho_f/phi");
        require(close(rho12, p.rho_f), "rho12", "inconsistent with rho_f");
        require(close(rho22, p.nu / p.phi * p.rho_f), "rho22", "inconsistent with rho_f/phi/nu");
    }
}

std::pair<double, double> MaterialParams::density_bounds() const
{
    const double mean = 0.5 * (rho11 + rho22);
    const double rad = std::sqrt(0.25 * (rho11 - rho22) * (rho11 - rho22) + rho12 * rho12);
    return {mean - rad, mean + rad};
}

std::pair<double, double> MaterialParams::compliance_bounds() const
{
    const double amin = 1.0 / (2.0 * mu + 2.0 * lambda);
    const double amax = 1.0 / (2.0 * mu);
    return {std::min(amin, s), std::max(amax, s)};
}

Eigen::Matrix3d MaterialParams::compliance_mandel() const
{
    const double kappa = lambda / (2.0 * mu + 2.0 * lambda);
    Eigen::Matrix3d a = Eigen::Matrix3d::Identity();
    a(0, 0) -= kappa;
    a(1, 1) -= kappa;
    a(0, 1) = a(1, 0) = -kappa;
    return a / (2.0 * mu);
}

SymTensor apply_C(const SymTensor& eps, const MaterialParams& m)
{
    const double l = m.lambda * eps.trace();
    return {2.0 * m.mu * eps.xx + l, 2.0 * m.mu * eps.yy + l, 2.0 * m.mu * eps.xy};
}

SymTensor apply_A(const SymTensor& sigma, const MaterialParams& m)
{
    const double l = m.lambda / (2.0 * m.mu + 2.0 * m.lambda) * sigma.trace();
    const double inv = 1.0 / (2.0 * m.mu);
    return {(sigma.xx - l) * inv, (sigma.yy - l) * inv, sigma.xy * inv};
}

WaveSpeeds wave_speeds(const MaterialParams& m)
{
    if (!m.provenance) throw ValidationError("wave speeds need material.rho_s (provenance data)");
    Eigen::Matrix2d b;
    b << m.lambda + 2.0 * m.mu + m.alpha * m.alpha / m.s, m.alpha / m.s, m.alpha / m.s, 1.0 / m.s;
    const Eigen::Matrix2d r = m.density();
    if (b.determinant() <= 0.0 || b(0, 0) <= 0.0 || r.determinant() <= 0.0 || r(0, 0) <= 0.0) {
        throw NumericalError("wave speeds: generalized eigenproblem is not symmetric positive definite");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(b, r);
    if (es.info() != Eigen::Success) throw NumericalError("wave speeds: eigen solver failed");
    const auto g = es.eigenvalues();  // ascending
    if (!(g[0] > 0.0) || !(g[1] > g[0])) throw NumericalError("wave speeds: degenerate eigenvalues");
    WaveSpeeds w;
    w.c_p2 = std::sqrt(g[0]);
    w.c_p1 = std::sqrt(g[1]);
    w.c_s = std::sqrt(m.mu / m.provenance->rho_s);
    return w;
}

MaterialParams material_preset(const std::string& name, double eta)
{
    if (name == "L1" || name == "L2") {
        MaterialParams m;
        m.rho11 = 10.0;
        m.rho12 = 10.0;
        m.rho22 = 20.0;
        m.mu = 50.0;
        m.lambda = name == "L1" ? 100.0 : 1e8;
        m.s = name == "L1" ? 1.0 : 1e-4;
        m.beta = 1.0;
        m.alpha = 1.0;
        return m;
    }
    if (name == "coeffs") {
        PoroProvenance p;
        p.rho_s = 2200.0;
        p.rho_f = 950.0;
        p.phi = 0.4;
        p.nu = 2.0;
        p.eta = eta;
        p.kappa = 1e-12;
        return MaterialParams::from_provenance(p, 4.3738e9, 7.2073e9, 1.462e-10, 0.0290);
    }
    throw ValidationError("unknown material preset '" + name + "' (expected L1, L2 or coeffs)");
}

}  // namespace porohdg
