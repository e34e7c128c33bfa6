// Acceptance driver: one PASS/FAIL line per criterion. Tolerances are fixed
// here, not configurable. Optional arguments select criteria by number.

#include "support.hpp"

#include "porohdg/verification.hpp"
#include "porohdg/wavebench.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

using namespace porohdg;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fixed(double v, int digits = 3)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string sci(double v)
{
    std::ostringstream os;
    os << std::scientific << std::setprecision(2) << v;
    return os.str();
}

bool within(double v, double lo, double hi) { return v >= lo && v <= hi; }

// 1. h-convergence, preset L1
Outcome spatial_rates()
{
    const MaterialParams l1 = material_preset("L1");
    const StudyResult k1 = h_study(1, l1, 4, 4, 0.3);
    const StudyResult k2 = h_study(2, l1, 4, 3, 0.3);
    const double a = k1.mean_rate_sigma_p(), b = k1.mean_rate_u();
    const double c = k2.mean_rate_sigma_p(), d = k2.mean_rate_u();
    const bool ok = within(a, 1.8, 2.5) && within(b, 2.5, 3.3) && c >= 2.8 && d >= 3.7;
    return {ok, "k=1 mean rates (" + fixed(a, 2) + ", " + fixed(b, 2) + ") in [1.8,2.5]x[2.5,3.3]; k=2 (" + fixed(c, 2) +
                    ", " + fixed(d, 2) + ") >= (2.8, 3.7)"};
}

// 2. near-incompressible, preset L2
Outcome incompressible_rates()
{
    const StudyResult s = h_study(2, material_preset("L2"), 4, 3, 0.3);
    const double a = s.mean_rate_sigma_p(), b = s.mean_rate_u();
    return {a >= 2.8 && b >= 3.8, "k=2 mean rates (" + fixed(a, 2) + ", " + fixed(b, 2) + ") >= (2.8, 3.8)"};
}

// 3. time convergence, h = 1/8, k = 4, dt = 1/16 ... 1/128
Outcome temporal_rates()
{
    const StudyResult s = dt_study(8, 4, material_preset("L1"), {16, 32, 64, 128}, 1.0);
    bool ok = s.warnings.empty();
    std::string rates;
    for (std::size_t i = 1; i < s.rows.size(); ++i) {
        const auto& r = s.rows[i];
        ok = ok && within(r.rate_sigma_p, 1.75, 2.25) && within(r.rate_u, 1.75, 2.25);
        rates += " (" + fixed(r.rate_sigma_p, 2) + ", " + fixed(r.rate_u, 2) + ")";
    }
    std::string detail = "per-level rates" + rates + " within 2.0 +- 0.25";
    for (const auto& w : s.warnings) detail += "; " + w;
    return {ok, detail};
}

// 4. p-convergence, h = 1/4, dt = 1e-4
Outcome degree_decay()
{
    const StudyResult s = p_study(4, material_preset("L1"), {2, 3, 4, 5}, 1e-4, 0.1);
    bool ok = true;
    std::string ratios;
    for (std::size_t i = 1; i < s.rows.size(); ++i) {
        const double a = s.rows[i].err.sigma_p / s.rows[i - 1].err.sigma_p;
        const double b = s.rows[i].err.u / s.rows[i - 1].err.u;
        ok = ok && a <= 0.5 && b <= 0.5;
        ratios += " (" + fixed(a, 3) + ", " + fixed(b, 3) + ")";
    }
    return {ok, "ratios e(k+1)/e(k), k=2..5:" + ratios + " <= 0.5"};
}

// 5. patch test
Outcome patch_test()
{
    const MaterialParams l1 = material_preset("L1");
    auto mesh = std::make_shared<const Mesh>(generate_structured(3));
    double worst = 0.0;
    for (int k = 0; k <= 2; ++k) {
        const HdgModel model(mesh, HdgSpace(k), l1);
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const PatchSolution ps(l1, k, seed);
            const BoundaryData bc(model, ps.boundary_conditions(model.skeleton()));
            const AnalyticFields f = ps.fields();
            const TimeGrid grid(0.5, 10);
            const RunResult r = run_transient(model, bc, ps.source(), initial_state(model, f), grid);
            const ErrorNorms e = error_norms(model, r.state, f, grid.T);
            worst = std::max({worst, e.sigma_p, e.u});
        }
    }
    return {worst <= 1e-9, "max error over k=0..2, 3 seeds, 10 steps: " + sci(worst) + " <= 1e-9"};
}

// 6. energy dissipation
Outcome energy_decay()
{
    double worst = -1.0;
    for (double beta : {0.0, 1.0}) {
        MaterialParams m = material_preset("L1");
        m.beta = beta;
        for (int k = 0; k <= 2; ++k) {
            for (std::uint64_t seed = 1; seed <= 2; ++seed) {
                EnergyTestOptions opt;
                opt.k = k;
                opt.steps = 200;
                opt.seed = seed;
                worst = std::max(worst, energy_test(m, opt).max_relative_increase);
            }
        }
    }
    return {worst <= 1e-10, "max (E^{n+1} - E^n)/E^0 over beta in {0,1}, k=0..2, 200 steps: " + sci(worst) +
                                " <= 1e-10"};
}

MaterialParams unit_material()
{
    PoroProvenance p;
    p.rho_s = 2.0;
    p.rho_f = 1.0;
    p.phi = 0.4;
    p.nu = 2.0;
    p.eta = 1.0;
    p.kappa = 1.0;
    return MaterialParams::from_provenance(p, 50.0, 100.0, 1.0, 1.0);
}

// 7. condensed vs monolithic dense solve
Outcome condensation_oracle()
{
    auto mesh = std::make_shared<const Mesh>(generate_structured(2));  // 8 triangles
    double worst = 0.0;
    for (int k = 0; k <= 2; ++k) {
        // (a) manufactured data with Dirichlet traces and a time-dependent source
        {
            const MaterialParams l1 = material_preset("L1");
            const HdgModel model(mesh, HdgSpace(k), l1);
            const ManufacturedSolution ms(l1);
            const BoundaryData bc(model, ms.boundary_conditions(model.skeleton()));
            const Source src = ms.source();
            DGState a = initial_state(model, ms.fields());
            DGState b = a;
            CnStepper stepper(model, bc, src, 0.05);
            for (int n = 0; n < 5; ++n) {
                stepper.step(a, (n + 1) * 0.05);
                testing::dense_cn_step(model, bc, src, b, (n + 1) * 0.05);
                const double num = std::hypot((a.vol - b.vol).norm(), (a.trace - b.trace).norm());
                worst = std::max(worst, num / std::hypot(b.vol.norm(), b.trace.norm()));
            }
        }
        // (b) every boundary role, absorbing included, from random data. The
        //     material is O(1) so rounding does not mask the comparison.
        {
            const MaterialParams c = unit_material();
            const HdgModel model(mesh, HdgSpace(k), c);
            BoundaryConditions roles;
            roles.roles[side::bottom] = {SolidRole::dirichlet, FluidRole::velocity};
            roles.roles[side::right] = {SolidRole::traction_free, FluidRole::pressure_free};
            roles.roles[side::top] = {SolidRole::traction_free, FluidRole::normal_velocity};
            roles.roles[side::left] = {SolidRole::absorbing, FluidRole::absorbing};
            const BoundaryData bc(model, roles);
            const Source none;
            DGState a = random_state(model, 7 + static_cast<std::uint64_t>(k));
            DGState b = a;
            CnStepper stepper(model, bc, none, 1e-3);
            for (int n = 0; n < 5; ++n) {
                stepper.step(a, (n + 1) * 1e-3);
                testing::dense_cn_step(model, bc, none, b, (n + 1) * 1e-3);
                const double num = std::hypot((a.vol - b.vol).norm(), (a.trace - b.trace).norm());
                worst = std::max(worst, num / std::hypot(b.vol.norm(), b.trace.norm()));
            }
        }
    }
    return {worst <= 1e-10, "max relative state difference over k=0..2, 2 cases, 5 steps: " + sci(worst) + " <= 1e-10"};
}

// 8. wave benchmark
Outcome wave_benchmark()
{
    WaveConfig cfg;  // 48 x 48, k = 3, dt = 0.005, T = 1.2, receiver (2000, 2200)
    const WaveResult inviscid = run_benchmark(cfg, material_preset("coeffs", 0.0));
    const WaveResult viscous = run_benchmark(cfg, material_preset("coeffs", 0.0015));

    // (a) finite, and nonincreasing once the source is off
    const double t_off = cfg.source.t0 + 3.0 / cfg.source.f0;
    bool bounded = true;
    for (const WaveResult* r : {&inviscid, &viscous}) {
        const auto& e = r->energy;
        for (std::size_t i = 0; i < e.total.size(); ++i) {
            bounded = bounded && std::isfinite(e.total[i]);
            if (i > 0 && e.t[i - 1] >= t_off) bounded = bounded && e.total[i] <= e.total[i - 1] * (1.0 + 1e-10);
        }
    }
    const ArrivalMetrics m0 = arrival_metrics(inviscid.receivers[0], cfg.source, inviscid.speeds);
    const ArrivalMetrics m1 = arrival_metrics(viscous.receivers[0], cfg.source, viscous.speeds);
    // (b) viscous damping of the slow wave
    const bool damped = m1.slow_peak < m0.slow_peak;
    // (c) fast arrival against d / c_pI, judged on the inviscid run whose
    //     fast wave travels at c_pI
    const double err = m0.relative_arrival_error();
    const bool arrival = err <= 0.15;
    std::string detail = std::string("(a) ") + (bounded ? "finite, nonincreasing after t=" : "NOT bounded after t=") +
                         fixed(t_off, 2) + " s; (b) slow-wave |p| peak " + sci(m1.slow_peak) + " (eta=0.0015) < " +
                         sci(m0.slow_peak) + " (eta=0); (c) arrival " + fixed(m0.fast_arrival) + " s vs d/c_pI " +
                         fixed(m0.fast_expected) + " s, rel. error " + fixed(err) + " <= 0.15 (viscous run " +
                         fixed(m1.relative_arrival_error()) + ")";
    return {bounded && damped && arrival, detail};
}

// 9. projection estimates and the discrete trace inequality
Outcome projection_lemmas()
{
    const ManufacturedSolution ms(material_preset("L1"));
    bool ok = true;
    std::string detail;
    for (int k = 1; k <= 2; ++k) {
        std::vector<ProjectionErrors> errs;
        for (int n : {4, 8, 16, 32}) errs.push_back(projection_errors(generate_structured(n), k, ms, 0.3));
        const double r1 = observed_rate(errs[2].element, errs[3].element, 2.0);
        const double r2 = observed_rate(errs[2].combined, errs[3].combined, 2.0);
        ok = ok && std::abs(r1 - (k + 1)) <= 0.2 && std::abs(r2 - (k + 1)) <= 0.2;
        detail += "k=" + std::to_string(k) + " rates (" + fixed(r1, 2) + ", " + fixed(r2, 2) + ") vs " +
                  std::to_string(k + 1) + " +- 0.2; ";
    }
    double cmin = 1e300, cmax = 0.0, spread = 0.0;
    for (int k = 0; k <= 6; ++k) {
        double lo = 1e300, hi = 0.0;
        for (int n : {4, 8, 16, 32}) {
            const double c = discrete_trace_constant(generate_structured(n), k);
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        spread = std::max(spread, hi / lo - 1.0);
        cmin = std::min(cmin, lo);
        cmax = std::max(cmax, hi);
    }
    // Refinement must not move the constant; across k it stays within a factor 2.
    ok = ok && spread <= 1e-6 && cmax <= 2.0 * cmin;
    detail += "trace constant in [" + fixed(cmin) + ", " + fixed(cmax) + "] over k<=6 and 3 refinements, refinement spread " +
              sci(spread);
    return {ok, detail};
}

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"h-convergence (L1)", spatial_rates},
        {"near-incompressible h-convergence (L2)", incompressible_rates},
        {"time-step convergence", temporal_rates},
        {"p-convergence", degree_decay},
        {"patch test", patch_test},
        {"energy dissipation", energy_decay},
        {"condensation vs dense solve", condensation_oracle},
        {"wave benchmark", wave_benchmark},
        {"projection and trace estimates", projection_lemmas},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << " " << criteria[i].first << ": " << o.detail
                  << " [" << fixed(secs, 1) << " s]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
