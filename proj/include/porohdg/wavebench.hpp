#pragma once

#include "porohdg/transient.hpp"

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace porohdg {

/// S(t) = (1 - 2 w^2 (t - t0)^2) exp(-w^2 (t - t0)^2), w = pi f0.
double ricker(double t, double f0, double t0);

/// F(x) = (1 - |r|^2 / radius^2) r / |r| for |r| < radius, else 0, with
/// r = x - center. F(center) = 0.
Vec2 spatial_source(const Point& x, const Point& center, double radius);

/// sqrt(3/2) |dev(s)|_F with the 2D deviator dev(s) = s - tr(s)/2 I.
double von_mises(const SymTensor& total_stress);

/// Solid pressure -tr(sigma)/2.
inline double solid_pressure(const SymTensor& sigma) { return -0.5 * sigma.trace(); }

struct SourceSpec {
    Point position{1600.0, 2900.0};
    double f0 = 5.0;
    double t0 = 0.3;
    double radius = 200.0;  ///< support radius (2h)
    double amplitude = 1.0;
};

struct WaveConfig {
    double length = 4800.0;  ///< square domain side
    int n = 48;
    int k = 3;
    double dt = 0.005;
    double T = 1.2;
    SourceSpec source;
    /// Negative: 2 * length / n.
    double source_radius = -1.0;
    std::vector<Point> receivers{Point(2000.0, 2200.0)};
    std::vector<double> snapshot_times;
    DiagonalRule diagonal = DiagonalRule::up;
    AbsorbingModel absorbing = AbsorbingModel::diagonal;
    std::filesystem::path output_dir;  ///< empty: no files written
};

/// Point values of the discrete fields.
struct PointSample {
    Vec2 us = Vec2::Zero();
    Vec2 uf = Vec2::Zero();
    SymTensor sigma;
    double p = 0.0;
};

/// Locates a point in the mesh: element index and reference coordinates.
/// Throws ValidationError if the point lies outside the mesh.
std::pair<int, Point> locate(const HdgModel& model, const Point& x);
PointSample sample(const HdgModel& model, const DGState& state, int element, const Point& ref);

struct ReceiverTrace {
    Point position;
    std::vector<double> t;
    std::vector<PointSample> samples;

    /// `t,usx,usy,ufx,ufy,ps,p` with header.
    std::string csv() const;
};

struct WaveResult {
    std::vector<ReceiverTrace> receivers;
    EnergyRecord energy;
    WaveSpeeds speeds;
    std::vector<std::filesystem::path> snapshots;
    double factorization_seconds = 0.0;
    double stepping_seconds = 0.0;
    std::size_t trace_unknowns = 0;
};

/// Travel-time diagnostics of one receiver trace. The fast wave is picked as
/// the peak of |p_s| (a Ricker's main lobe sits on its peak, so an onset
/// threshold would read early by the half-width of the wavelet); the slow wave
/// as the peak of |p| within 1/f0 of its geometric arrival t0 + d / c_pII.
struct ArrivalMetrics {
    double distance = 0.0;         ///< source to receiver
    double fast_arrival = 0.0;     ///< picked travel time, peak time minus t0
    double fast_expected = 0.0;    ///< distance / c_pI
    double slow_peak = 0.0;        ///< max |p| in the slow-wave window
    double slow_window[2] = {0.0, 0.0};
    double relative_arrival_error() const { return std::abs(fast_arrival - fast_expected) / fast_expected; }
};

ArrivalMetrics arrival_metrics(const ReceiverTrace& trace, const SourceSpec& source, const WaveSpeeds& speeds);

/// Top boundary traction free with u_f . n = 0, the other three sides
/// absorbing, zero initial data, F_s = F_f = F(x) S(t), g = 0.
WaveResult run_benchmark(const WaveConfig& config, const MaterialParams& params);

/// Legacy ASCII VTK of the state, each element subdivided into (k+1)^2
/// triangles with nodal values of u_s, u_f, p, p_s and von Mises stress.
void write_vtk(const HdgModel& model, const DGState& state, const std::filesystem::path& path);

/// Writes `text` to `path` through a temporary file and a rename.
void write_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace porohdg
