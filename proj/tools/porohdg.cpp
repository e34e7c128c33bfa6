// Command-line front end: convergence studies, energy test and the wave benchmark.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#include "porohdg/config.hpp"
#include "porohdg/verification.hpp"
#include "porohdg/wavebench.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace porohdg;
using json = nlohmann::ordered_json;

namespace {

struct Flags {
    std::string config;
    std::string preset;
    std::string k;
    std::string levels;
    std::string eta;
    std::string seed;
    std::vector<std::string> receivers;
    std::string out;
    std::vector<std::string> set;
};

KeyValues collect(const Flags& f)
{
    KeyValues kv;
    if (!f.config.empty()) kv = read_ini(f.config);
    auto put = [&kv](const char* key, const std::string& v) {
        if (!v.empty()) kv[key] = v;
    };
    put("material.preset", f.preset);
    put("discretization.k", f.k);
    put("mesh.levels", f.levels);
    put("material.eta", f.eta);
    put("run.seed", f.seed);
    put("output.dir", f.out);
    if (!f.receivers.empty()) {
        std::string joined;
        for (const auto& r : f.receivers) joined += (joined.empty() ? "" : ";") + r;
        kv["wave.receivers"] = joined;
    }
    for (const auto& item : f.set) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw ValidationError("--set expects key=value, got '" + item + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

class PhaseClock {
public:
    template <class F>
    auto time(const std::string& phase, F&& f)
    {
        const auto t0 = std::chrono::steady_clock::now();
        struct Record {
            PhaseClock& c;
            std::string phase;
            std::chrono::steady_clock::time_point t0;
            ~Record() { c.timings_[phase] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); }
        } rec{*this, phase, t0};
        return f();
    }
    void set(const std::string& phase, double seconds) { timings_[phase] = seconds; }
    const json& timings() const { return timings_; }

private:
    json timings_ = json::object();
};

json rows_json(const StudyResult& s)
{
    json rows = json::array();
    for (const auto& r : s.rows) {
        json row = {{"level", r.level}, {"h", r.h}, {"dt", r.dt}, {"k", r.k},
                    {"err_sigma_p", r.err.sigma_p}, {"err_u", r.err.u}};
        if (std::isfinite(r.rate_sigma_p)) {
            row["rate_sigma_p"] = r.rate_sigma_p;
            row["rate_u"] = r.rate_u;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string energy_csv(const EnergyRecord& e)
{
    std::ostringstream os;
    os << "t,h1,h2,total,dissipation\n" << std::setprecision(12);
    for (std::size_t i = 0; i < e.t.size(); ++i) {
        os << e.t[i] << ',' << e.h1[i] << ',' << e.h2[i] << ',' << e.total[i] << ',' << e.dissipation[i] << '\n';
    }
    return os.str();
}

json run(const RunConfig& cfg, PhaseClock& clock)
{
    json results = json::object();
    switch (cfg.command) {
    case Command::convergence_h:
    case Command::convergence_dt:
    case Command::convergence_p: {
        const StudyResult s = clock.time("study", [&] {
            if (cfg.command == Command::convergence_h) return h_study(cfg.k, cfg.material, cfg.n, cfg.levels, cfg.T, cfg.min_steps,
                                                                               cfg.fluid_normal_only);
            if (cfg.command == Command::convergence_dt) return dt_study(cfg.n, cfg.k, cfg.material, cfg.steps, cfg.T, cfg.fluid_normal_only);
            return p_study(cfg.n, cfg.material, cfg.degrees, cfg.dt, cfg.T, cfg.fluid_normal_only);
        });
        clock.time("output", [&] { write_atomic(cfg.out / "study.csv", s.csv()); });
        results["kind"] = s.kind;
        if (s.kind != "p") {
            results["mean_rate_sigma_p"] = s.mean_rate_sigma_p();
            results["mean_rate_u"] = s.mean_rate_u();
        }
        results["rows"] = rows_json(s);
        results["warnings"] = s.warnings;
        for (const auto& r : s.rows) {
            std::cout << std::setw(3) << r.level << "  h=" << std::setw(10) << r.h << "  dt=" << std::setw(10) << r.dt
                      << "  k=" << r.k << "  e(sigma,p)=" << std::setw(12) << r.err.sigma_p << "  e(u)=" << std::setw(12)
                      << r.err.u;
            if (std::isfinite(r.rate_sigma_p)) std::cout << "  rates " << r.rate_sigma_p << " " << r.rate_u;
            std::cout << '\n';
        }
        for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
        break;
    }
    case Command::energy_test: {
        EnergyTestOptions opt;
        opt.n = cfg.n;
        opt.k = cfg.k;
        opt.steps = cfg.energy_steps;
        opt.dt = cfg.dt;
        opt.seed = cfg.seed;
        const EnergyTestResult r = clock.time("run", [&] { return energy_test(cfg.material, opt); });
        clock.time("output", [&] { write_atomic(cfg.out / "energy.csv", energy_csv(r.energy)); });
        results["initial_energy"] = r.energy.total.front();
        results["final_energy"] = r.energy.total.back();
        results["max_relative_increase"] = r.max_relative_increase;
        std::cout << "E0=" << r.energy.total.front() << "  E_end=" << r.energy.total.back()
                  << "  max (E^{n+1}-E^n)/E0=" << r.max_relative_increase << '\n';
        break;
    }
    case Command::wave: {
        const WaveResult r = clock.time("run", [&] { return run_benchmark(cfg.wave, cfg.material); });
        clock.set("factorization", r.factorization_seconds);
        clock.set("stepping", r.stepping_seconds);
        clock.time("output", [&] { write_atomic(cfg.out / "energy.csv", energy_csv(r.energy)); });
        results["wave_speeds"] = {{"c_s", r.speeds.c_s}, {"c_pI", r.speeds.c_p1}, {"c_pII", r.speeds.c_p2}};
        results["trace_unknowns"] = r.trace_unknowns;
        results["max_energy"] = *std::max_element(r.energy.total.begin(), r.energy.total.end());
        results["final_energy"] = r.energy.total.back();
        json recv = json::array();
        for (std::size_t i = 0; i < r.receivers.size(); ++i) {
            const ArrivalMetrics m = arrival_metrics(r.receivers[i], cfg.wave.source, r.speeds);
            recv.push_back({{"file", "receiver_" + std::to_string(i) + ".csv"},
                            {"position", {r.receivers[i].position.x(), r.receivers[i].position.y()}},
                            {"distance", m.distance},
                            {"fast_arrival", m.fast_arrival},
                            {"fast_expected", m.fast_expected},
                            {"slow_peak_p", m.slow_peak}});
            std::cout << "receiver " << i << " (" << r.receivers[i].position.x() << ", " << r.receivers[i].position.y()
                      << "): fast arrival " << m.fast_arrival << " s (d/c_pI = " << m.fast_expected
                      << " s), slow-wave |p| peak " << m.slow_peak << '\n';
        }
        results["receivers"] = recv;
        json snaps = json::array();
        for (const auto& s : r.snapshots) snaps.push_back(s.filename().string());
        results["snapshots"] = snaps;
        break;
    }
    }
    return results;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hybridizable DG solver for dynamic Biot poroelasticity", "porohdg"};
    app.require_subcommand(1);
    Flags flags;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"convergence-h", "manufactured-solution mesh refinement study"},
        {"convergence-dt", "manufactured-solution time-step refinement study"},
        {"convergence-p", "manufactured-solution polynomial degree study"},
        {"energy-test", "unforced run from random data; reports the energy history"},
        {"wave", "Ricker source wave benchmark with receivers and snapshots"},
    };
    for (const auto& [name, description] : commands) {
        CLI::App* sub = app.add_subcommand(name, description);
        sub->add_option("--config", flags.config, "INI file with [section] key = value entries");
        sub->add_option("--preset", flags.preset, "material preset: L1, L2, coeffs");
        sub->add_option("--k", flags.k, "polynomial degree");
        sub->add_option("--levels", flags.levels, "number of mesh levels (convergence-h)");
        sub->add_option("--eta", flags.eta, "fluid viscosity (preset coeffs)");
        sub->add_option("--seed", flags.seed, "random seed (energy-test)");
        sub->add_option("--receivers", flags.receivers, "receiver x,y (repeatable)");
        sub->add_option("--out", flags.out, "output directory");
        sub->add_option("--set", flags.set, "any config key, as section.key=value (repeatable)");
    }

    if (argc < 2) {
        std::cerr << app.help();
        return 1;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const Command command = parse_command(app.get_subcommands().front()->get_name());
    try {
        PhaseClock clock;
        const RunConfig cfg = clock.time("config", [&] { return build_config(command, collect(flags)); });
        json results = run(cfg, clock);

        char hash[17];
        std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash()));
        json summary = {{"version", POROHDG_VERSION},
                        {"command", to_string(cfg.command)},
                        {"config_hash", hash},
                        {"config", cfg.resolved()},
                        {"timings_seconds", clock.timings()},
                        {"results", results}};
        write_atomic(cfg.out / "summary.json", summary.dump(2) + "\n");
        std::cout << "wrote " << (cfg.out / "summary.json").string() << '\n';
        return 0;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
