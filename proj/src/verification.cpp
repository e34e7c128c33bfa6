#include "porohdg/verification.hpp"

#include "porohdg/basis.hpp"
#include "porohdg/parallel.hpp"
#include "porohdg/projection.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

namespace porohdg {

namespace {
constexpr double pi = std::numbers::pi;
}

ManufacturedSolution::ManufacturedSolution(const MaterialParams& params) : params_(params)
{
    det_ = params.beta * params.beta + params.rho22 * params.rho22;
    if (!(det_ > 0.0)) throw ValidationError("manufactured solution needs beta > 0 or rho22 > 0");
}

double ManufacturedSolution::p(const Point& x, double t) const { return std::sin(pi * x.x() * x.y()) * std::cos(t); }

Vec2 ManufacturedSolution::grad_p(const Point& x, double t) const
{
    const double c = pi * std::cos(pi * x.x() * x.y()) * std::cos(t);
    return {c * x.y(), c * x.x()};
}

double ManufacturedSolution::dp_dt(const Point& x, double t) const
{
    return -std::sin(pi * x.x() * x.y()) * std::sin(t);
}

Vec2 ManufacturedSolution::displacement(const Point& x, double t) const
{
    return {x.x() * std::cos(pi * x.y()) * std::cos(t), x.y() * std::sin(pi * x.x()) * std::sin(t)};
}

Vec2 ManufacturedSolution::us(const Point& x, double t) const
{
    return {-x.x() * std::cos(pi * x.y()) * std::sin(t), x.y() * std::sin(pi * x.x()) * std::cos(t)};
}

Eigen::Matrix2d ManufacturedSolution::grad_us(const Point& x, double t) const
{
    Eigen::Matrix2d g;
    g << -std::cos(pi * x.y()) * std::sin(t), pi * x.x() * std::sin(pi * x.y()) * std::sin(t),
        pi * x.y() * std::cos(pi * x.x()) * std::cos(t), std::sin(pi * x.x()) * std::cos(t);
    return g;
}

Vec2 ManufacturedSolution::dus_dt(const Point& x, double t) const
{
    return {-x.x() * std::cos(pi * x.y()) * std::cos(t), -x.y() * std::sin(pi * x.x()) * std::sin(t)};
}

double ManufacturedSolution::div_us(const Point& x, double t) const
{
    return -std::cos(pi * x.y()) * std::sin(t) + std::sin(pi * x.x()) * std::cos(t);
}

Vec2 ManufacturedSolution::gc(const Point& x) const
{
    const double cxy = std::cos(pi * x.x() * x.y());
    return {params_.rho12 * x.x() * std::cos(pi * x.y()) - pi * x.y() * cxy, -pi * x.x() * cxy};
}

Vec2 ManufacturedSolution::gs(const Point& x) const { return {0.0, params_.rho12 * x.y() * std::sin(pi * x.x())}; }

double ManufacturedSolution::div_gc(const Point& x) const
{
    return params_.rho12 * std::cos(pi * x.y()) +
           pi * pi * (x.x() * x.x() + x.y() * x.y()) * std::sin(pi * x.x() * x.y());
}

double ManufacturedSolution::div_gs(const Point& x) const { return params_.rho12 * std::sin(pi * x.x()); }

Vec2 ManufacturedSolution::uf(const Point& x, double t) const
{
    const double b = params_.beta;
    const double r = params_.rho22;
    const Vec2 uc = (b * gc(x) - r * gs(x)) / det_;
    const Vec2 usn = (r * gc(x) + b * gs(x)) / det_;
    return uc * std::cos(t) + usn * std::sin(t);
}

Vec2 ManufacturedSolution::duf_dt(const Point& x, double t) const
{
    const double b = params_.beta;
    const double r = params_.rho22;
    const Vec2 uc = (b * gc(x) - r * gs(x)) / det_;
    const Vec2 usn = (r * gc(x) + b * gs(x)) / det_;
    return -uc * std::sin(t) + usn * std::cos(t);
}

double ManufacturedSolution::div_uf(const Point& x, double t) const
{
    const double b = params_.beta;
    const double r = params_.rho22;
    const double dc = (b * div_gc(x) - r * div_gs(x)) / det_;
    const double ds = (r * div_gc(x) + b * div_gs(x)) / det_;
    return dc * std::cos(t) + ds * std::sin(t);
}

SymTensor ManufacturedSolution::sigma(const Point& x, double t) const
{
    const double c = std::cos(t);
    const double s = std::sin(t);
    SymTensor eps;
    eps.xx = std::cos(pi * x.y()) * c;
    eps.yy = std::sin(pi * x.x()) * s;
    eps.xy = 0.5 * (-pi * x.x() * std::sin(pi * x.y()) * c + pi * x.y() * std::cos(pi * x.x()) * s);
    return apply_C(eps, params_);
}

Vec2 ManufacturedSolution::div_sigma(const Point& x, double t) const
{
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double mu = params_.mu;
    const double lam = params_.lambda;
    const double cx = std::cos(pi * x.x());
    const double sx = std::sin(pi * x.x());
    const double cy = std::cos(pi * x.y());
    const double sy = std::sin(pi * x.y());
    return {lam * pi * cx * s + mu * (-pi * pi * x.x() * cy * c + pi * cx * s),
            mu * (-pi * sy * c - pi * pi * x.y() * sx * s) - lam * pi * sy * c};
}

Vec2 ManufacturedSolution::Fs(const Point& x, double t) const
{
    return params_.rho11 * dus_dt(x, t) + params_.rho12 * duf_dt(x, t) - div_sigma(x, t) +
           params_.alpha * grad_p(x, t);
}

double ManufacturedSolution::g(const Point& x, double t) const
{
    return params_.s * dp_dt(x, t) + div_uf(x, t) + params_.alpha * div_us(x, t);
}

AnalyticFields ManufacturedSolution::fields() const
{
    AnalyticFields f;
    f.us = [this](const Point& x, double t) { return us(x, t); };
    f.uf = [this](const Point& x, double t) { return uf(x, t); };
    f.sigma = [this](const Point& x, double t) { return sigma(x, t); };
    f.p = [this](const Point& x, double t) { return p(x, t); };
    return f;
}

Source ManufacturedSolution::source() const
{
    Source s;
    s.eval = [this](const Point& x, double t, double* out) {
        const Vec2 fs = Fs(x, t);
        out[0] = fs.x();
        out[1] = fs.y();
        out[2] = 0.0;
        out[3] = 0.0;
        out[4] = g(x, t);
    };
    return s;
}

BoundaryConditions ManufacturedSolution::boundary_conditions(const Skeleton& skeleton, bool fluid_normal_only) const
{
    BoundaryRole role{SolidRole::dirichlet, fluid_normal_only ? FluidRole::normal_velocity : FluidRole::velocity};
    BoundaryConditions bc = BoundaryConditions::uniform(skeleton, role);
    bc.solid_velocity = [this](const Point& x, double t) { return us(x, t); };
    bc.fluid_velocity = [this](const Point& x, double t) { return uf(x, t); };
    return bc;
}

ErrorNorms error_norms(const HdgModel& model, const DGState& state, const AnalyticFields& exact, double t, int order)
{
    const auto& sp = model.space();
    const auto& prm = model.params();
    if (order < 0) order = sp.load_order() + 6;  // saturated: doubling changes the norms below 1e-10
    const auto tab = volume_tabulation(sp.k + 1, order);
    const Eigen::Matrix3d a = prm.compliance_mandel();
    const Eigen::Matrix2d r = prm.density();
    std::vector<double> esp(static_cast<std::size_t>(model.num_elements()));
    std::vector<double> eu(static_cast<std::size_t>(model.num_elements()));
    parallel_for(model.num_elements(), [&](int e) {
        const auto& g = model.geometry(e);
        const Eigen::VectorXd c = state.element(model, e);
        const double scale = 1.0 / std::sqrt(g.det);
        double sum_sp = 0.0;
        double sum_u = 0.0;
        for (std::size_t q = 0; q < tab->rule.size(); ++q) {
            const auto row = tab->values.row(static_cast<Eigen::Index>(q));
            const Point x = g.map(tab->rule.points[q]);
            const double w = tab->rule.weights[q] * g.det;
            Eigen::Vector4d uh;
            for (int comp = 0; comp < 4; ++comp) uh[comp] = scale * row.dot(c.segment(sp.u_index(comp, 0), sp.n1));
            Eigen::Vector4d sh;
            for (int m = 0; m < 4; ++m) sh[m] = scale * row.head(sp.n0).dot(c.segment(sp.s_index(m, 0), sp.n0));
            const Vec2 us = exact.us ? exact.us(x, t) : Vec2::Zero();
            const Vec2 uf = exact.uf ? exact.uf(x, t) : Vec2::Zero();
            const Eigen::Vector3d sig = exact.sigma ? exact.sigma(x, t).mandel() : Eigen::Vector3d::Zero();
            const double p = exact.p ? exact.p(x, t) : 0.0;
            const Eigen::Vector3d ds = sig - sh.head<3>();
            const double dp = p - sh[3];
            sum_sp += w * (ds.dot(a * ds) + prm.s * dp * dp);
            for (int comp = 0; comp < 2; ++comp) {
                const Vec2 du(us[comp] - uh[comp], uf[comp] - uh[2 + comp]);
                sum_u += w * du.dot(r * du);
            }
        }
        esp[static_cast<std::size_t>(e)] = sum_sp;
        eu[static_cast<std::size_t>(e)] = sum_u;
    });
    ErrorNorms n;
    for (std::size_t e = 0; e < esp.size(); ++e) {
        n.sigma_p += esp[e];
        n.u += eu[e];
    }
    n.sigma_p = std::sqrt(std::max(n.sigma_p, 0.0));
    n.u = std::sqrt(std::max(n.u, 0.0));
    return n;
}

double observed_rate(double e_coarse, double e_fine, double ratio)
{
    return std::log(e_coarse / e_fine) / std::log(ratio);
}

double StudyResult::mean_rate_sigma_p() const
{
    double s = 0.0;
    int n = 0;
    for (std::size_t i = 1; i < rows.size(); ++i, ++n) s += rows[i].rate_sigma_p;
    return n > 0 ? s / n : std::numeric_limits<double>::quiet_NaN();
}

double StudyResult::mean_rate_u() const
{
    double s = 0.0;
    int n = 0;
    for (std::size_t i = 1; i < rows.size(); ++i, ++n) s += rows[i].rate_u;
    return n > 0 ? s / n : std::numeric_limits<double>::quiet_NaN();
}

std::string StudyResult::csv() const
{
    std::ostringstream os;
    os << "level,h,dt,k,err_sigma_p,err_u,rate_sigma_p,rate_u\n";
    os << std::setprecision(10);
    for (const auto& r : rows) {
        os << r.level << ',' << r.h << ',' << r.dt << ',' << r.k << ',' << r.err.sigma_p << ',' << r.err.u << ',';
        if (std::isnan(r.rate_sigma_p)) {
            os << ",\n";
        } else {
            os << r.rate_sigma_p << ',' << r.rate_u << '\n';
        }
    }
    return os.str();
}

ErrorNorms run_manufactured(std::shared_ptr<const Mesh> mesh, const MaterialParams& params,
                            const ManufacturedRunOptions& opt)
{
    const ManufacturedSolution ms(params);
    const HdgModel model(std::move(mesh), HdgSpace(opt.k), params);
    const BoundaryData bc(model, ms.boundary_conditions(model.skeleton(), opt.fluid_normal_only));
    const AnalyticFields exact = ms.fields();
    const Source src = ms.source();
    const DGState init = initial_state(model, exact, 0.0);
    const TimeGrid grid(opt.T, opt.steps);
    const RunResult r = run_transient(model, bc, src, init, grid);
    return error_norms(model, r.state, exact, opt.T);
}

int steps_for_level(double T, double h, double h_coarse, int k, int min_steps)
{
    const double e = 0.5 * (k + 2);
    const double c = T / (min_steps * std::pow(h_coarse, e));
    return static_cast<int>(std::ceil(T / (c * std::pow(h, e)) - 1e-9));
}

namespace {

void fill_rates(StudyResult& s, bool by_h)
{
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        auto& r = s.rows[i];
        if (i == 0) {
            r.rate_sigma_p = r.rate_u = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        const auto& q = s.rows[i - 1];
        const double ratio = by_h ? q.h / r.h : q.dt / r.dt;
        r.rate_sigma_p = observed_rate(q.err.sigma_p, r.err.sigma_p, ratio);
        r.rate_u = observed_rate(q.err.u, r.err.u, ratio);
    }
}

}  // namespace

StudyResult h_study(int k, const MaterialParams& params, int n0, int levels, double T, int min_steps,
                    bool fluid_normal_only)
{
    if (levels < 3) throw ValidationError("convergence.levels must be at least 3");
    if (n0 < 1) throw ValidationError("mesh.n must be positive");
    StudyResult s;
    s.kind = "h";
    double h_coarse = 0.0;
    for (int l = 0; l < levels; ++l) {
        const int n = n0 << l;
        auto mesh = std::make_shared<const Mesh>(generate_structured(n));
        const double h = mesh->max_diameter();
        if (l == 0) h_coarse = h;
        ManufacturedRunOptions opt;
        opt.k = k;
        opt.T = T;
        opt.fluid_normal_only = fluid_normal_only;
        opt.steps = steps_for_level(T, h, h_coarse, k, min_steps);
        StudyRow row;
        row.level = l;
        row.h = h;
        row.dt = T / opt.steps;
        row.k = k;
        row.err = run_manufactured(mesh, params, opt);
        s.rows.push_back(row);
    }
    fill_rates(s, true);
    return s;
}

StudyResult dt_study(int n, int k, const MaterialParams& params, const std::vector<int>& steps, double T,
                     bool fluid_normal_only)
{
    if (steps.size() < 2) throw ValidationError("time study needs at least two step counts");
    StudyResult s;
    s.kind = "dt";
    auto mesh = std::make_shared<const Mesh>(generate_structured(n));
    for (std::size_t l = 0; l < steps.size(); ++l) {
        ManufacturedRunOptions opt;
        opt.k = k;
        opt.T = T;
        opt.fluid_normal_only = fluid_normal_only;
        opt.steps = steps[l];
        StudyRow row;
        row.level = static_cast<int>(l);
        row.h = mesh->max_diameter();
        row.dt = T / steps[l];
        row.k = k;
        row.err = run_manufactured(mesh, params, opt);
        s.rows.push_back(row);
    }
    fill_rates(s, false);

    ManufacturedRunOptions fine;
    fine.k = k;
    fine.T = T;
    fine.fluid_normal_only = fluid_normal_only;
    fine.steps = 4 * *std::max_element(steps.begin(), steps.end());
    const ErrorNorms floor = run_manufactured(mesh, params, fine);
    const ErrorNorms& coarse = s.rows.front().err;
    if (floor.sigma_p > 0.1 * coarse.sigma_p || floor.u > 0.1 * coarse.u) {
        std::ostringstream os;
        os << "spatial error floor (" << floor.sigma_p << ", " << floor.u
           << ") exceeds 10% of the coarsest time error; rates may be contaminated";
        s.warnings.push_back(os.str());
    }
    return s;
}

StudyResult p_study(int n, const MaterialParams& params, const std::vector<int>& ks, double dt, double T,
                    bool fluid_normal_only)
{
    if (!(dt > 0.0)) throw ValidationError("time.dt must be positive");
    StudyResult s;
    s.kind = "p";
    auto mesh = std::make_shared<const Mesh>(generate_structured(n));
    const int steps = static_cast<int>(std::ceil(T / dt - 1e-9));
    for (std::size_t l = 0; l < ks.size(); ++l) {
        ManufacturedRunOptions opt;
        opt.k = ks[l];
        opt.T = T;
        opt.fluid_normal_only = fluid_normal_only;
        opt.steps = steps;
        StudyRow row;
        row.level = static_cast<int>(l);
        row.h = mesh->max_diameter();
        row.dt = T / steps;
        row.k = ks[l];
        row.err = run_manufactured(mesh, params, opt);
        s.rows.push_back(row);
    }
    // Rates in k are successive error ratios here.
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        auto& r = s.rows[i];
        if (i == 0) {
            r.rate_sigma_p = r.rate_u = std::numeric_limits<double>::quiet_NaN();
        } else {
            r.rate_sigma_p = r.err.sigma_p / s.rows[i - 1].err.sigma_p;
            r.rate_u = r.err.u / s.rows[i - 1].err.u;
        }
    }
    return s;
}

DGState random_state(const HdgModel& model, std::uint64_t seed)
{
    DGState st = DGState::zero(model);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index i = 0; i < st.vol.size(); ++i) st.vol[i] = dist(rng);
    return st;
}

EnergyTestResult energy_test(const MaterialParams& params, const EnergyTestOptions& opt)
{
    if (opt.n < 1) throw ValidationError("mesh.n must be positive");
    if (opt.steps < 1) throw ValidationError("energy.steps must be positive");
    if (!(opt.dt > 0.0)) throw ValidationError("time.dt must be positive");
    auto mesh = std::make_shared<const Mesh>(generate_structured(opt.n, Rectangle{}, DiagonalRule::up));
    const HdgModel model(mesh, HdgSpace(opt.k), params);
    const BoundaryData bc(model,
                          BoundaryConditions::uniform(model.skeleton(), {SolidRole::dirichlet, FluidRole::pressure_free}));
    const TimeGrid grid(opt.steps * opt.dt, opt.steps);
    EnergyTestResult res;
    res.energy = run_transient(model, bc, Source{}, random_state(model, opt.seed), grid).energy;
    const auto& e = res.energy.total;
    res.max_relative_increase = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < e.size(); ++i) res.max_relative_increase = std::max(res.max_relative_increase, (e[i] - e[i - 1]) / e[0]);
    return res;
}

// ---------------------------------------------------------------------------
// Patch solution

double PatchSolution::Poly::value(const Point& x) const { return derivative(x, 0, 0); }

double PatchSolution::Poly::derivative(const Point& x, int a, int b) const
{
    auto falling = [](int n, int m) {
        double f = 1.0;
        for (int i = 0; i < m; ++i) f *= n - i;
        return f;
    };
    double sum = 0.0;
    std::size_t idx = 0;
    for (int d = 0; d <= degree; ++d) {
        for (int j = 0; j <= d; ++j, ++idx) {
            const int i = d - j;
            if (i < a || j < b) continue;
            sum += c[idx] * falling(i, a) * falling(j, b) * std::pow(x.x(), i - a) * std::pow(x.y(), j - b);
        }
    }
    return sum;
}

PatchSolution::PatchSolution(const MaterialParams& params, int k, std::uint64_t seed) : params_(params)
{
    if (k < 0) throw ValidationError("discretization.k must be non-negative");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto poly = [&](int degree) {
        Poly q;
        q.degree = degree;
        q.c.resize(static_cast<std::size_t>(triangle_dim(degree)));
        for (auto& v : q.c) v = dist(rng);
        return q;
    };
    for (auto& q : us0_) q = poly(k + 1);
    for (auto& q : uf0_) q = poly(k + 1);
    for (auto& q : uf1_) q = poly(k + 1);
    for (auto& q : sigma0_) q = poly(k);
    p0_ = poly(k);
    p1_ = poly(k);
    rigid_ = {dist(rng), dist(rng), dist(rng)};
}

Vec2 PatchSolution::us(const Point& x, double t) const
{
    const Vec2 r(rigid_[0] - rigid_[2] * x.y(), rigid_[1] + rigid_[2] * x.x());
    return Vec2(us0_[0].value(x), us0_[1].value(x)) + t * r;
}

Vec2 PatchSolution::uf(const Point& x, double t) const
{
    return Vec2(uf0_[0].value(x) + t * uf1_[0].value(x), uf0_[1].value(x) + t * uf1_[1].value(x));
}

SymTensor PatchSolution::sigma(const Point& x, double t) const
{
    const SymTensor eps{us0_[0].derivative(x, 1, 0), us0_[1].derivative(x, 0, 1),
                        0.5 * (us0_[0].derivative(x, 0, 1) + us0_[1].derivative(x, 1, 0))};
    const SymTensor s0{sigma0_[0].value(x), sigma0_[1].value(x), sigma0_[2].value(x)};
    return s0 + apply_C(eps, params_) * t;
}

double PatchSolution::p(const Point& x, double t) const { return p0_.value(x) + t * p1_.value(x); }

AnalyticFields PatchSolution::fields() const
{
    AnalyticFields f;
    f.us = [this](const Point& x, double t) { return us(x, t); };
    f.uf = [this](const Point& x, double t) { return uf(x, t); };
    f.sigma = [this](const Point& x, double t) { return sigma(x, t); };
    f.p = [this](const Point& x, double t) { return p(x, t); };
    return f;
}

Source PatchSolution::source() const
{
    Source src;
    src.eval = [this](const Point& x, double t, double* out) {
        const auto& m = params_;
        const Vec2 r(rigid_[0] - rigid_[2] * x.y(), rigid_[1] + rigid_[2] * x.x());
        const Vec2 duf(uf1_[0].value(x), uf1_[1].value(x));
        // div sigma0 + t div C eps(u0), div C eps(u) = mu lap u + (mu + lambda) grad div u
        const auto& u = us0_;
        const Vec2 lap(u[0].derivative(x, 2, 0) + u[0].derivative(x, 0, 2), u[1].derivative(x, 2, 0) + u[1].derivative(x, 0, 2));
        const Vec2 grad_div(u[0].derivative(x, 2, 0) + u[1].derivative(x, 1, 1), u[0].derivative(x, 1, 1) + u[1].derivative(x, 0, 2));
        const Vec2 div_s0(sigma0_[0].derivative(x, 1, 0) + sigma0_[2].derivative(x, 0, 1),
                          sigma0_[2].derivative(x, 1, 0) + sigma0_[1].derivative(x, 0, 1));
        const Vec2 div_sigma = div_s0 + t * (m.mu * lap + (m.mu + m.lambda) * grad_div);
        const Vec2 grad_p(p0_.derivative(x, 1, 0) + t * p1_.derivative(x, 1, 0),
                          p0_.derivative(x, 0, 1) + t * p1_.derivative(x, 0, 1));
        const Vec2 fs = m.rho11 * r + m.rho12 * duf - div_sigma + m.alpha * grad_p;
        const Vec2 ff = m.rho12 * r + m.rho22 * duf + m.beta * uf(x, t) + grad_p;
        // the rigid part of u_s is divergence free
        const double div_us = u[0].derivative(x, 1, 0) + u[1].derivative(x, 0, 1);
        const double div_uf = uf0_[0].derivative(x, 1, 0) + uf0_[1].derivative(x, 0, 1) +
                              t * (uf1_[0].derivative(x, 1, 0) + uf1_[1].derivative(x, 0, 1));
        out[0] = fs.x();
        out[1] = fs.y();
        out[2] = ff.x();
        out[3] = ff.y();
        out[4] = m.s * p1_.value(x) + m.alpha * div_us + div_uf;
    };
    return src;
}

BoundaryConditions PatchSolution::boundary_conditions(const Skeleton& skeleton) const
{
    BoundaryConditions bc = BoundaryConditions::uniform(skeleton, {SolidRole::dirichlet, FluidRole::velocity});
    bc.solid_velocity = [this](const Point& x, double t) { return us(x, t); };
    bc.fluid_velocity = [this](const Point& x, double t) { return uf(x, t); };
    return bc;
}

// ---------------------------------------------------------------------------
// Projection estimates

ProjectionErrors projection_errors(const Mesh& mesh, int k, const ManufacturedSolution& exact, double t)
{
    if (k < 0) throw ValidationError("discretization.k must be non-negative");
    const int order = 2 * (k + 1) + 6;
    const QuadratureRule vol = quadrature_triangle(order);
    const QuadratureRule edge = quadrature_edge(order);
    const double kk = (k + 1.0) * (k + 1.0);
    const int n1 = triangle_dim(k + 1);
    std::vector<double> v(static_cast<std::size_t>(n1)), vx(v.size()), vy(v.size());

    double e_elem_vol = 0.0;
    double e_elem_bnd = 0.0;
    double e_comb = 0.0;
    for (int tri = 0; tri < static_cast<int>(mesh.num_triangles()); ++tri) {
        const ElementGeometry g = element_geometry(mesh, tri);
        const double scale = 1.0 / std::sqrt(g.det);

        const FieldEval sp_field = [&](const Point& x, double* out) {
            const Eigen::Vector3d m = exact.sigma(x, t).mandel();
            out[0] = m[0];
            out[1] = m[1];
            out[2] = m[2];
            out[3] = exact.p(x, t);
        };
        const FieldEval u_field = [&](const Point& x, double* out) {
            const Vec2 s = exact.us(x, t);
            const Vec2 f = exact.uf(x, t);
            out[0] = s.x();
            out[1] = s.y();
            out[2] = f.x();
            out[3] = f.y();
        };
        const Eigen::MatrixXd csp = l2_project_element(sp_field, 4, k, g, order);
        const Eigen::MatrixXd cu = l2_project_element(u_field, 4, k + 1, g, order);

        auto projected = [&](const Point& ref, const Eigen::MatrixXd& c, int degree, Eigen::Vector4d& val,
                             Eigen::Matrix<double, 4, 2>* grad) {
            triangle_basis(degree, ref, v.data(), vx.data(), vy.data());
            const int n = triangle_dim(degree);
            val.setZero();
            if (grad) grad->setZero();
            for (int i = 0; i < n; ++i) {
                const Vec2 gr = g.jac_inv_t * Vec2(vx[static_cast<std::size_t>(i)], vy[static_cast<std::size_t>(i)]);
                for (int comp = 0; comp < 4; ++comp) {
                    val[comp] += scale * c(i, comp) * v[static_cast<std::size_t>(i)];
                    if (grad) grad->row(comp) += scale * c(i, comp) * gr.transpose();
                }
            }
        };

        for (std::size_t q = 0; q < vol.size(); ++q) {
            const Point x = g.map(vol.points[q]);
            const double w = vol.weights[q] * g.det;
            Eigen::Vector4d ex, pr;
            sp_field(x, ex.data());
            projected(vol.points[q], csp, k, pr, nullptr);
            e_elem_vol += w * (ex - pr).squaredNorm();

            Eigen::Matrix<double, 4, 2> gp;
            Eigen::Vector4d up;
            projected(vol.points[q], cu, k + 1, up, &gp);
            const Eigen::Matrix2d gs = exact.grad_us(x, t) - gp.topRows<2>();
            const double exy = 0.5 * (gs(0, 1) + gs(1, 0));
            const double div_f = exact.div_uf(x, t) - (gp(2, 0) + gp(3, 1));
            e_comb += w * (gs(0, 0) * gs(0, 0) + gs(1, 1) * gs(1, 1) + 2.0 * exy * exy + div_f * div_f);
        }

        for (int e = 0; e < 3; ++e) {
            const Point a = g.x[static_cast<std::size_t>(e)];
            const Point b = g.x[static_cast<std::size_t>((e + 1) % 3)];
            const double len = (b - a).norm();
            const Eigen::MatrixXd cf = l2_project_face(u_field, 4, k + 1, a, b, order);
            for (std::size_t q = 0; q < edge.size(); ++q) {
                const double sq = edge.points[q].x();
                const Point x = a + sq * (b - a);
                const Point ref = reference_edge_point(e, sq, false);
                const double w = edge.weights[q] * len;
                Eigen::Vector4d ex, pr;
                sp_field(x, ex.data());
                projected(ref, csp, k, pr, nullptr);
                e_elem_bnd += w * len / kk * (ex - pr).squaredNorm();

                Eigen::Vector4d ut, uface;
                projected(ref, cu, k + 1, ut, nullptr);
                for (int comp = 0; comp < 4; ++comp) uface[comp] = evaluate_face(cf.col(comp), k + 1, len, sq);
                e_comb += w * kk / len * (uface - ut).squaredNorm();
            }
        }
    }
    ProjectionErrors r;
    r.element = std::sqrt(e_elem_vol) + std::sqrt(e_elem_bnd);
    r.combined = std::sqrt(e_comb);
    return r;
}

double discrete_trace_constant(const Mesh& mesh, int k)
{
    if (k < 0) throw ValidationError("discretization.k must be non-negative");
    const int n = triangle_dim(k);
    const QuadratureRule edge = quadrature_edge(2 * k + 2);
    std::vector<double> v(static_cast<std::size_t>(n));
    double worst = 0.0;
    for (int tri = 0; tri < static_cast<int>(mesh.num_triangles()); ++tri) {
        const ElementGeometry g = element_geometry(mesh, tri);
        // Orthonormal basis on K: the volume Gram matrix is the identity.
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
        for (int e = 0; e < 3; ++e) {
            const double len = (g.x[static_cast<std::size_t>((e + 1) % 3)] - g.x[static_cast<std::size_t>(e)]).norm();
            for (std::size_t q = 0; q < edge.size(); ++q) {
                triangle_basis(k, reference_edge_point(e, edge.points[q].x(), false), v.data());
                const Eigen::Map<const Eigen::VectorXd> phi(v.data(), n);
                b += edge.weights[q] * len * (len / ((k + 1.0) * (k + 1.0))) / g.det * phi * phi.transpose();
            }
        }
        worst = std::max(worst, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(b).eigenvalues().maxCoeff());
    }
    return std::sqrt(worst);
}

}  // namespace porohdg
