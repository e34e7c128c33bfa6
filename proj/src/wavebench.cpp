#include "porohdg/wavebench.hpp"

#include "porohdg/basis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace porohdg {

double ricker(double t, double f0, double t0)
{
    const double w = std::numbers::pi * f0;
    const double a = w * w * (t - t0) * (t - t0);
    return (1.0 - 2.0 * a) * std::exp(-a);
}

Vec2 spatial_source(const Point& x, const Point& center, double radius)
{
    const Vec2 r = x - center;
    const double d = r.norm();
    if (d >= radius || d == 0.0) return Vec2::Zero();
    return (1.0 - d * d / (radius * radius)) * (r / d);
}

double von_mises(const SymTensor& s)
{
    const double m = 0.5 * s.trace();
    const SymTensor dev{s.xx - m, s.yy - m, s.xy};
    return std::sqrt(1.5 * dev.dot(dev));
}

std::pair<int, Point> locate(const HdgModel& model, const Point& x)
{
    for (int e = 0; e < model.num_elements(); ++e) {
        const auto& g = model.geometry(e);
        const Point r = g.to_reference(x);
        const double tol = 1e-12;
        if (r.x() >= -tol && r.y() >= -tol && r.x() + r.y() <= 1.0 + tol) return {e, r};
    }
    std::ostringstream os;
    os << "point (" << x.x() << ", " << x.y() << ") lies outside the mesh";
    throw ValidationError(os.str());
}

PointSample sample(const HdgModel& model, const DGState& state, int element, const Point& ref)
{
    const auto& sp = model.space();
    Eigen::VectorXd v(sp.n1);
    triangle_basis(sp.k + 1, ref, v.data());
    v /= std::sqrt(model.geometry(element).det);
    const Eigen::VectorXd c = state.element(model, element);
    auto u = [&](int comp) { return v.dot(c.segment(sp.u_index(comp, 0), sp.n1)); };
    auto s = [&](int m) { return v.head(sp.n0).dot(c.segment(sp.s_index(m, 0), sp.n0)); };
    PointSample out;
    out.us = {u(0), u(1)};
    out.uf = {u(2), u(3)};
    out.sigma = SymTensor::from_mandel(Eigen::Vector3d(s(0), s(1), s(2)));
    out.p = s(3);
    return out;
}

std::string ReceiverTrace::csv() const
{
    std::ostringstream os;
    os << "t,usx,usy,ufx,ufy,ps,p\n" << std::setprecision(12);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const auto& s = samples[i];
        os << t[i] << ',' << s.us.x() << ',' << s.us.y() << ',' << s.uf.x() << ',' << s.uf.y() << ','
           << solid_pressure(s.sigma) << ',' << s.p << '\n';
    }
    return os.str();
}

ArrivalMetrics arrival_metrics(const ReceiverTrace& trace, const SourceSpec& source, const WaveSpeeds& speeds)
{
    if (trace.t.empty()) throw ValidationError("empty receiver trace");
    ArrivalMetrics m;
    m.distance = (trace.position - source.position).norm();
    m.fast_expected = m.distance / speeds.c_p1;
    double best = -1.0;
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        const double a = std::abs(solid_pressure(trace.samples[i].sigma));
        if (a > best) {
            best = a;
            m.fast_arrival = trace.t[i] - source.t0;
        }
    }
    const double centre = source.t0 + m.distance / speeds.c_p2;
    m.slow_window[0] = centre - 1.0 / source.f0;
    m.slow_window[1] = centre + 1.0 / source.f0;
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        if (trace.t[i] < m.slow_window[0] || trace.t[i] > m.slow_window[1]) continue;
        m.slow_peak = std::max(m.slow_peak, std::abs(trace.samples[i].p));
    }
    return m;
}

void write_atomic(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write " + tmp.string());
        out << text;
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_vtk(const HdgModel& model, const DGState& state, const std::filesystem::path& path)
{
    const auto& sp = model.space();
    const auto& prm = model.params();
    const int m = sp.k + 1;  // subdivisions per edge
    const int nodes_per = (m + 1) * (m + 2) / 2;
    const int cells_per = m * m;
    const int ne = model.num_elements();

    std::vector<Point> refs;
    for (int j = 0; j <= m; ++j) {
        for (int i = 0; i + j <= m; ++i) refs.emplace_back(static_cast<double>(i) / m, static_cast<double>(j) / m);
    }
    auto node = [m](int i, int j) {
        // index of lattice point (i, j) in the ordering above
        int idx = 0;
        for (int jj = 0; jj < j; ++jj) idx += m + 1 - jj;
        return idx + i;
    };

    std::ostringstream os;
    os << std::setprecision(9);
    os << "# vtk DataFile Version 3.0\nporohdg t=" << state.t << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    os << "POINTS " << ne * nodes_per << " double\n";
    std::vector<PointSample> samples;
    samples.reserve(static_cast<std::size_t>(ne * nodes_per));
    for (int e = 0; e < ne; ++e) {
        const auto& g = model.geometry(e);
        for (const auto& r : refs) {
            const Point x = g.map(r);
            os << x.x() << ' ' << x.y() << " 0\n";
            samples.push_back(sample(model, state, e, r));
        }
    }
    os << "CELLS " << ne * cells_per << ' ' << ne * cells_per * 4 << '\n';
    for (int e = 0; e < ne; ++e) {
        const int base = e * nodes_per;
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i + j < m; ++i) {
                os << "3 " << base + node(i, j) << ' ' << base + node(i + 1, j) << ' ' << base + node(i, j + 1) << '\n';
                if (i + j + 1 < m) {
                    os << "3 " << base + node(i + 1, j) << ' ' << base + node(i + 1, j + 1) << ' '
                       << base + node(i, j + 1) << '\n';
                }
            }
        }
    }
    os << "CELL_TYPES " << ne * cells_per << '\n';
    for (int c = 0; c < ne * cells_per; ++c) os << "5\n";
    os << "POINT_DATA " << ne * nodes_per << '\n';
    os << "VECTORS u_s double\n";
    for (const auto& s : samples) os << s.us.x() << ' ' << s.us.y() << " 0\n";
    os << "VECTORS u_f double\n";
    for (const auto& s : samples) os << s.uf.x() << ' ' << s.uf.y() << " 0\n";
    os << "SCALARS p double 1\nLOOKUP_TABLE default\n";
    for (const auto& s : samples) os << s.p << '\n';
    os << "SCALARS p_s double 1\nLOOKUP_TABLE default\n";
    for (const auto& s : samples) os << solid_pressure(s.sigma) << '\n';
    os << "SCALARS von_mises double 1\nLOOKUP_TABLE default\n";
    for (const auto& s : samples) {
        os << von_mises(s.sigma - SymTensor{prm.alpha * s.p, prm.alpha * s.p, 0.0}) << '\n';
    }
    write_atomic(path, os.str());
}

namespace {

/// Single consumer thread writing snapshots handed over by the time loop.
class SnapshotWriter {
public:
    explicit SnapshotWriter(const HdgModel& model) : model_(model), worker_([this] { loop(); }) {}
    ~SnapshotWriter()
    {
        try {
            finish();
        } catch (...) {
            // errors are reported by an explicit finish()
        }
    }

    void push(DGState state, std::filesystem::path path)
    {
        {
            std::lock_guard lock(mutex_);
            queue_.emplace_back(std::move(state), std::move(path));
        }
        cv_.notify_one();
    }

    /// Drains the queue; rethrows the first writer error.
    void finish()
    {
        {
            std::lock_guard lock(mutex_);
            if (done_) return;
            done_ = true;
        }
        cv_.notify_one();
        worker_.join();
        if (error_) std::rethrow_exception(error_);
    }

private:
    void loop()
    {
        for (;;) {
            std::unique_lock lock(mutex_);
            cv_.wait(lock, [this] { return done_ || !queue_.empty(); });
            if (queue_.empty()) return;
            auto item = std::move(queue_.front());
            queue_.pop_front();
            lock.unlock();
            try {
                if (!error_) write_vtk(model_, item.first, item.second);
            } catch (...) {
                error_ = std::current_exception();
            }
        }
    }

    const HdgModel& model_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<std::pair<DGState, std::filesystem::path>> queue_;
    bool done_ = false;
    std::exception_ptr error_;
    std::thread worker_;
};

}  // namespace

WaveResult run_benchmark(const WaveConfig& cfg, const MaterialParams& params)
{
    if (cfg.n < 1) throw ValidationError("mesh.n must be positive");
    if (!(cfg.dt > 0.0) || !(cfg.T > 0.0)) throw ValidationError("time.dt and time.T must be positive");
    if (!(cfg.source.f0 > 0.0)) throw ValidationError("source.f0 must be positive");
    const Rectangle domain{0.0, 0.0, cfg.length, cfg.length};
    const double radius = cfg.source_radius > 0.0 ? cfg.source_radius : 2.0 * cfg.length / cfg.n;
    const Point& xs = cfg.source.position;
    if (xs.x() - radius <= domain.x0 || xs.x() + radius >= domain.x1 || xs.y() - radius <= domain.y0 ||
        xs.y() + radius >= domain.y1) {
        throw ValidationError("source support must lie strictly inside the domain");
    }

    auto mesh = std::make_shared<const Mesh>(generate_structured(cfg.n, domain, cfg.diagonal));
    const HdgModel model(mesh, HdgSpace(cfg.k), params);

    BoundaryConditions bc;
    bc.absorbing = cfg.absorbing;
    bc.roles[side::top] = {SolidRole::traction_free, FluidRole::normal_velocity};
    for (int tag : {side::bottom, side::left, side::right}) bc.roles[tag] = {SolidRole::absorbing, FluidRole::absorbing};
    const BoundaryData bdata(model, bc);

    Source src;
    const double amp = cfg.source.amplitude;
    src.eval = [xs, radius, amp](const Point& x, double, double* out) {
        const Vec2 f = amp * spatial_source(x, xs, radius);
        out[0] = f.x();
        out[1] = f.y();
        out[2] = f.x();
        out[3] = f.y();
        out[4] = 0.0;
    };
    src.time_factor = [f0 = cfg.source.f0, t0 = cfg.source.t0](double t) { return ricker(t, f0, t0); };
    src.support = std::make_pair(xs, radius);

    WaveResult res;
    res.speeds = wave_speeds(params);
    res.trace_unknowns = static_cast<std::size_t>(model.trace_size());

    std::vector<std::pair<int, Point>> where;
    for (const auto& r : cfg.receivers) {
        where.push_back(locate(model, r));
        res.receivers.push_back(ReceiverTrace{r, {}, {}});
    }

    const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
    if (std::abs(steps * cfg.dt - cfg.T) > 1e-9 * cfg.T) {
        throw ValidationError("time.T must be an integer multiple of time.dt");
    }
    const TimeGrid grid(cfg.T, steps);

    std::vector<int> snap_steps;
    for (double ts : cfg.snapshot_times) {
        if (ts < 0.0 || ts > cfg.T) throw ValidationError("snapshot time outside [0, T]");
        snap_steps.push_back(static_cast<int>(std::llround(ts / grid.dt())));
    }
    std::unique_ptr<SnapshotWriter> writer;
    if (!cfg.output_dir.empty() && !snap_steps.empty()) writer = std::make_unique<SnapshotWriter>(model);

    auto observe = [&](int n, const DGState& s) {
        for (std::size_t r = 0; r < where.size(); ++r) {
            res.receivers[r].t.push_back(s.t);
            res.receivers[r].samples.push_back(sample(model, s, where[r].first, where[r].second));
        }
        if (writer && std::find(snap_steps.begin(), snap_steps.end(), n) != snap_steps.end()) {
            std::ostringstream name;
            name << "snapshot_" << std::setw(5) << std::setfill('0') << n << ".vtk";
            const auto path = cfg.output_dir / name.str();
            writer->push(s, path);
            res.snapshots.push_back(path);
        }
    };

    DGState state = DGState::zero(model);
    res.energy.push(0.0, energy(model, state));
    observe(0, state);
    const auto t0 = std::chrono::steady_clock::now();
    CnStepper stepper(model, bdata, src, grid.dt());
    const auto t1 = std::chrono::steady_clock::now();
    for (int n = 0; n < grid.L; ++n) {
        try {
            stepper.step(state, grid.t(n + 1));
        } catch (const NumericalError& e) {
            throw NumericalError("wave benchmark step " + std::to_string(n + 1) + ": " + e.what());
        }
        res.energy.push(state.t, energy(model, state));
        observe(n + 1, state);
    }
    const auto t2 = std::chrono::steady_clock::now();
    if (writer) writer->finish();
    res.factorization_seconds = std::chrono::duration<double>(t1 - t0).count();
    res.stepping_seconds = std::chrono::duration<double>(t2 - t1).count();

    if (!cfg.output_dir.empty()) {
        for (std::size_t r = 0; r < res.receivers.size(); ++r) {
            write_atomic(cfg.output_dir / ("receiver_" + std::to_string(r) + ".csv"), res.receivers[r].csv());
        }
    }
    return res;
}

}  // namespace porohdg
