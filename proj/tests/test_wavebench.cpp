#include "porohdg/wavebench.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace porohdg;

TEST(Ricker, Examples)
{
    const double f0 = 5.0, t0 = 0.3, w = std::numbers::pi * f0;
    EXPECT_DOUBLE_EQ(ricker(t0, f0, t0), 1.0);
    const double z = 1.0 / (std::sqrt(2.0) * w);
    EXPECT_NEAR(ricker(t0 + z, f0, t0), 0.0, 1e-15);
    EXPECT_NEAR(ricker(t0 - z, f0, t0), 0.0, 1e-15);
    // S(0) in long double as the higher-precision reference
    const long double a = std::numbers::pi_v<long double> * 5.0L * 0.3L;
    const long double s0 = (1.0L - 2.0L * a * a) * std::exp(-a * a);
    EXPECT_NEAR(ricker(0.0, f0, t0), static_cast<double>(s0), 1e-15);
}

TEST(SpatialSource, Profile)
{
    const Point c(1600, 2900);
    const double h = 100.0;
    const Vec2 f = spatial_source(c + Vec2(h, 0), c, 2 * h);
    EXPECT_NEAR(f.x(), 0.75, 1e-15);
    EXPECT_NEAR(f.y(), 0.0, 1e-15);
    EXPECT_TRUE(spatial_source(c + Vec2(0, 2 * h), c, 2 * h).isZero(1e-15));
    EXPECT_TRUE(spatial_source(c + Vec2(3 * h, 0), c, 2 * h).isZero(0.0));
    EXPECT_TRUE(spatial_source(c, c, 2 * h).isZero(0.0));
}

// Polar midpoint quadrature of F over its support disc; the field is odd.
TEST(SpatialSource, ZeroNetForce)
{
    const Point c(0.3, -0.2);
    const double R = 2.0;
    Vec2 sum = Vec2::Zero();
    const int nr = 40, nt = 64;
    for (int i = 0; i < nr; ++i) {
        const double r = (i + 0.5) * R / nr;
        for (int j = 0; j < nt; ++j) {
            const double th = (j + 0.25) * 2 * std::numbers::pi / nt;
            sum += spatial_source(c + r * Vec2(std::cos(th), std::sin(th)), c, R) * r;
        }
    }
    EXPECT_LT(sum.norm() * (R / nr) * (2 * std::numbers::pi / nt), 1e-12);
}

TEST(VonMises, Convention)
{
    EXPECT_NEAR(von_mises({4.0, 4.0, 0.0}), 0.0, 1e-15);
    EXPECT_NEAR(von_mises({1.0, -1.0, 0.0}), std::sqrt(3.0), 1e-15);
    const SymTensor s{0.3, -1.1, 0.7};
    EXPECT_NEAR(von_mises(s * 2.0), 2.0 * von_mises(s), 1e-14);
    EXPECT_DOUBLE_EQ(solid_pressure({2.0, 4.0, 1.0}), -3.0);
}

namespace {

WaveConfig small_config()
{
    WaveConfig c;
    c.n = 6;
    c.k = 0;
    c.dt = 0.01;
    c.T = 0.1;
    c.source_radius = 500.0;
    return c;
}

}  // namespace

TEST(Benchmark, ZeroAmplitudeGivesZeroFields)
{
    WaveConfig c = small_config();
    c.source.amplitude = 0.0;
    const WaveResult r = run_benchmark(c, material_preset("coeffs"));
    ASSERT_EQ(r.receivers.size(), 1u);
    for (const auto& s : r.receivers[0].samples) {
        EXPECT_EQ(s.us.norm(), 0.0);
        EXPECT_EQ(s.uf.norm(), 0.0);
        EXPECT_EQ(s.p, 0.0);
    }
    for (double e : r.energy.total) EXPECT_EQ(e, 0.0);
}

TEST(Benchmark, SourceInjectsBoundedEnergy)
{
    WaveConfig c = small_config();
    c.T = 0.6;
    const WaveResult r = run_benchmark(c, material_preset("coeffs", 0.0015));
    EXPECT_GT(r.trace_unknowns, 0u);
    double peak = 0.0;
    for (double e : r.energy.total) {
        ASSERT_TRUE(std::isfinite(e));
        peak = std::max(peak, e);
    }
    EXPECT_GT(peak, 0.0);
    EXPECT_EQ(r.receivers[0].t.size(), r.receivers[0].samples.size());
    const ArrivalMetrics m = arrival_metrics(r.receivers[0], c.source, r.speeds);
    EXPECT_NEAR(m.distance, (Point(2000, 2200) - c.source.position).norm(), 1e-9);
    EXPECT_NEAR(m.fast_expected, m.distance / r.speeds.c_p1, 1e-12);
}

TEST(Benchmark, InvalidConfig)
{
    WaveConfig c = small_config();
    c.source_radius = 5000.0;
    EXPECT_THROW(run_benchmark(c, material_preset("coeffs")), ValidationError);
    c = small_config();
    c.receivers = {Point(6000, 10)};
    EXPECT_THROW(run_benchmark(c, material_preset("coeffs")), ValidationError);
    c = small_config();
    EXPECT_THROW(run_benchmark(c, material_preset("L1")), ValidationError);  // no provenance
}

TEST(Benchmark, ArrivalMetricsOnSyntheticTrace)
{
    const WaveSpeeds w{1000.0, 3000.0, 1000.0};
    SourceSpec src;
    src.position = Point(0, 0);
    src.t0 = 0.3;
    src.f0 = 5.0;
    ReceiverTrace tr;
    tr.position = Point(600, 0);  // fast arrival 0.2 s, slow 0.6 s
    for (int i = 0; i <= 200; ++i) {
        const double t = 0.01 * i;
        PointSample s;
        const double fast = ricker(t, 5.0, 0.3 + 0.2);
        s.sigma = SymTensor{-2 * fast, -2 * fast, 0.0};  // p_s = 2 fast
        s.p = 0.1 * fast + 0.5 * ricker(t, 5.0, 0.3 + 0.6);
        tr.t.push_back(t);
        tr.samples.push_back(s);
    }
    const ArrivalMetrics m = arrival_metrics(tr, src, w);
    EXPECT_NEAR(m.fast_arrival, 0.2, 1e-12);
    EXPECT_NEAR(m.fast_expected, 0.2, 1e-12);
    EXPECT_NEAR(m.relative_arrival_error(), 0.0, 1e-10);
    EXPECT_NEAR(m.slow_peak, 0.5, 1e-3);
    EXPECT_NEAR(m.slow_window[0], 0.3 + 0.6 - 0.2, 1e-12);
    EXPECT_NEAR(m.slow_window[1], 0.3 + 0.6 + 0.2, 1e-12);
}

TEST(Output, AtomicWriteAndVtk)
{
    const auto dir = std::filesystem::temp_directory_path() / "porohdg_test_out";
    std::filesystem::remove_all(dir);
    write_atomic(dir / "a.txt", "hello\n");
    std::ifstream in(dir / "a.txt");
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "hello");

    const HdgModel model(std::make_shared<const Mesh>(generate_structured(2)), HdgSpace(1), material_preset("L1"));
    write_vtk(model, DGState::zero(model), dir / "s.vtk");
    std::ifstream v(dir / "s.vtk");
    std::getline(v, line);
    EXPECT_EQ(line.rfind("# vtk DataFile", 0), 0u);
    std::filesystem::remove_all(dir);
}

TEST(Receivers, LocateAndSample)
{
    const HdgModel model(std::make_shared<const Mesh>(generate_structured(4)), HdgSpace(1), material_preset("L1"));
    AnalyticFields f;
    f.p = [](const Point& x, double) { return 1 + 2 * x.x() - x.y(); };
    const DGState s = initial_state(model, f);
    const Point x(0.33, 0.71);
    const auto [t, ref] = locate(model, x);
    EXPECT_TRUE(model.geometry(t).map(ref).isApprox(x, 1e-14));
    EXPECT_NEAR(sample(model, s, t, ref).p, f.p(x, 0), 1e-13);
    EXPECT_THROW(locate(model, Point(1.5, 0.5)), ValidationError);
}
