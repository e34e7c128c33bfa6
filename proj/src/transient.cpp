#include "porohdg/transient.hpp"

#include "porohdg/parallel.hpp"
#include "porohdg/projection.hpp"

#include <cmath>
#include <string>

namespace porohdg {

TimeGrid::TimeGrid(double final_time, int steps) : T(final_time), L(steps)
{
    if (!(final_time > 0.0)) throw ValidationError("time.T must be positive");
    if (steps < 0) throw ValidationError("time.steps must be non-negative");
}

DGState DGState::zero(const HdgModel& model, double t)
{
    DGState s;
    s.vol = Eigen::VectorXd::Zero(model.volume_size());
    s.trace = Eigen::VectorXd::Zero(model.trace_size());
    s.t = t;
    return s;
}

namespace {

bool outside_support(const ElementGeometry& g, const std::optional<std::pair<Point, double>>& support)
{
    if (!support) return false;
    const auto& [c, r] = *support;
    const double xmin = std::min({g.x[0].x(), g.x[1].x(), g.x[2].x()});
    const double xmax = std::max({g.x[0].x(), g.x[1].x(), g.x[2].x()});
    const double ymin = std::min({g.x[0].y(), g.x[1].y(), g.x[2].y()});
    const double ymax = std::max({g.x[0].y(), g.x[1].y(), g.x[2].y()});
    const double dx = std::max({xmin - c.x(), 0.0, c.x() - xmax});
    const double dy = std::max({ymin - c.y(), 0.0, c.y() - ymax});
    return dx * dx + dy * dy >= r * r;
}

}  // namespace

Eigen::VectorXd assemble_load(const HdgModel& model, const Source& source, double t)
{
    Eigen::VectorXd l = Eigen::VectorXd::Zero(model.volume_size());
    if (source.empty()) return l;
    const auto& sp = model.space();
    parallel_for(model.num_elements(), [&](int e) {
        const auto& g = model.geometry(e);
        if (outside_support(g, source.support)) return;
        auto f = [&](const Point& x, double* out) { source.eval(x, t, out); };
        // Orthonormal basis: projection coefficients are the load integrals.
        const Eigen::MatrixXd c = l2_project_element(f, 5, sp.k + 1, g, sp.load_order());
        auto block = l.segment(static_cast<Eigen::Index>(e) * sp.nv, sp.nv);
        for (int comp = 0; comp < 4; ++comp) block.segment(sp.u_index(comp, 0), sp.n1) = c.col(comp);
        block.segment(sp.s_index(3, 0), sp.n0) = c.col(4).head(sp.n0);
    });
    return l;
}

DGState initial_state(const HdgModel& model, const AnalyticFields& fields, double t)
{
    DGState s = DGState::zero(model, t);
    const auto& sp = model.space();
    parallel_for(model.num_elements(), [&](int e) {
        const auto& g = model.geometry(e);
        auto f = [&](const Point& x, double* out) {
            const Vec2 us = fields.us ? fields.us(x, t) : Vec2::Zero();
            const Vec2 uf = fields.uf ? fields.uf(x, t) : Vec2::Zero();
            const Eigen::Vector3d sig = fields.sigma ? fields.sigma(x, t).mandel() : Eigen::Vector3d::Zero();
            out[0] = us.x();
            out[1] = us.y();
            out[2] = uf.x();
            out[3] = uf.y();
            out[4] = sig[0];
            out[5] = sig[1];
            out[6] = sig[2];
            out[7] = fields.p ? fields.p(x, t) : 0.0;
        };
        const Eigen::MatrixXd c = l2_project_element(f, 8, sp.k + 1, g, sp.load_order());
        auto block = s.vol.segment(static_cast<Eigen::Index>(e) * sp.nv, sp.nv);
        for (int comp = 0; comp < 4; ++comp) block.segment(sp.u_index(comp, 0), sp.n1) = c.col(comp);
        for (int m = 0; m < 4; ++m) block.segment(sp.s_index(m, 0), sp.n0) = c.col(4 + m).head(sp.n0);
    });
    if (fields.us || fields.uf) {
        const auto& mesh = model.mesh();
        for (int fi = 0; fi < model.num_faces(); ++fi) {
            const Face& face = model.skeleton().face(fi);
            auto f = [&](const Point& x, double* out) {
                const Vec2 us = fields.us ? fields.us(x, t) : Vec2::Zero();
                const Vec2 uf = fields.uf ? fields.uf(x, t) : Vec2::Zero();
                out[0] = us.dot(face.normal);
                out[1] = us.dot(face.tangent);
                out[2] = uf.dot(face.normal);
                out[3] = uf.dot(face.tangent);
            };
            const Eigen::MatrixXd c =
                l2_project_face(f, 4, sp.k + 1, mesh.vertex(face.v[0]), mesh.vertex(face.v[1]), sp.load_order());
            for (int comp = 0; comp < 4; ++comp) {
                for (int m = 0; m < sp.nf; ++m) s.trace[model.face_dof(fi, comp, m)] = c(m, comp);
            }
        }
    }
    return s;
}

Energy energy(const HdgModel& model, const DGState& state)
{
    const auto& sp = model.space();
    const int nu = 4 * sp.n1;
    Energy en;
    for (int e = 0; e < model.num_elements(); ++e) {
        const Eigen::VectorXd x = state.element(model, e);
        const Eigen::MatrixXd& m = model.local(e).mass;
        en.h1 += x.head(nu).dot(m.topLeftCorner(nu, nu) * x.head(nu));
        en.h2 += x.tail(sp.nv - nu).dot(m.bottomRightCorner(sp.nv - nu, sp.nv - nu) * x.tail(sp.nv - nu));
    }
    return en;
}

void EnergyRecord::push(double time, const Energy& e)
{
    dissipation.push_back(total.empty() ? 0.0 : total.back() - e.total());
    t.push_back(time);
    h1.push_back(e.h1);
    h2.push_back(e.h2);
    total.push_back(e.total());
}

CnStepper::CnStepper(const HdgModel& model, const BoundaryData& bc, const Source& source, double dt)
    : model_(model), bc_(bc), source_(source), system_(model, bc, dt)
{
    if (!source.empty() && source.time_factor) spatial_load_ = assemble_load(model, source, 0.0);
}

Eigen::VectorXd CnStepper::load(double t)
{
    if (source_.empty()) return Eigen::VectorXd::Zero(model_.volume_size());
    if (source_.time_factor) return source_.time_factor(t) * spatial_load_;
    if (last_load_ && last_load_->first == t) return last_load_->second;
    Eigen::VectorXd l = assemble_load(model_, source_, t);
    last_load_ = std::make_pair(t, l);
    return l;
}

void CnStepper::step(DGState& state) { step(state, state.t + system_.dt()); }

void CnStepper::step(DGState& state, double t1)
{
    const double dt = system_.dt();
    const double t0 = state.t;
    const Eigen::VectorXd l0 = load(t0);
    const Eigen::VectorXd l1 = load(t1);

    const Eigen::VectorXd rv = system_.apply_mass(state.vol) / dt + 0.25 * (l0 + l1);
    const Eigen::VectorXd rl = Eigen::VectorXd::Zero(model_.trace_size());
    const Eigen::VectorXd g1 = bc_.prescribed(model_, t1);
    Eigen::VectorXd wfix = Eigen::VectorXd::Zero(model_.trace_size());
    for (int d : bc_.constrained()) wfix[d] = 0.5 * (g1[d] + state.trace[d]);

    Eigen::VectorXd wv;
    Eigen::VectorXd wl;
    system_.solve(rv, rl, wfix, wv, wl);
    state.vol = 2.0 * wv - state.vol;
    state.trace = 2.0 * wl - state.trace;
    for (int d : bc_.constrained()) state.trace[d] = g1[d];
    state.t = t1;
    if (!state.vol.allFinite() || !state.trace.allFinite()) {
        throw NumericalError("non-finite state at t = " + std::to_string(t1));
    }
}

RunResult run_transient(const HdgModel& model, const BoundaryData& bc, const Source& source, const DGState& initial,
                        const TimeGrid& grid, const StepObserver& observer)
{
    RunResult r;
    r.state = initial;
    r.state.t = 0.0;
    r.energy.push(0.0, energy(model, r.state));
    if (observer) observer(0, r.state);
    if (grid.L == 0) return r;
    CnStepper stepper(model, bc, source, grid.dt());
    for (int n = 0; n < grid.L; ++n) {
        try {
            stepper.step(r.state, grid.t(n + 1));
        } catch (const NumericalError& e) {
            throw NumericalError("step " + std::to_string(n + 1) + ": " + e.what());
        }
        r.energy.push(r.state.t, energy(model, r.state));
        if (observer) observer(n + 1, r.state);
    }
    return r;
}

}  // namespace porohdg
