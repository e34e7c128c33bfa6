#include "porohdg/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <functional>
#include <sstream>

namespace porohdg {

Command parse_command(const std::string& name)
{
    if (name == "convergence-h") return Command::convergence_h;
    if (name == "convergence-dt") return Command::convergence_dt;
    if (name == "convergence-p") return Command::convergence_p;
    if (name == "energy-test") return Command::energy_test;
    if (name == "wave") return Command::wave;
    throw ValidationError("unknown command '" + name + "'");
}

std::string to_string(Command c)
{
    switch (c) {
    case Command::convergence_h: return "convergence-h";
    case Command::convergence_dt: return "convergence-dt";
    case Command::convergence_p: return "convergence-p";
    case Command::energy_test: return "energy-test";
    case Command::wave: return "wave";
    }
    return "?";
}

KeyValues read_ini(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) throw Error("cannot read config file " + path.string());
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ParseError(e.what());
    }
    KeyValues out;
    for (const auto& [section, body] : tree) {
        if (body.empty()) {
            // top-level key outside any section
            out[section] = body.data();
            continue;
        }
        for (const auto& [key, value] : body) out[section + "." + key] = value.data();
    }
    return out;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) parts.push_back(trim(item));
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double to_double(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ValidationError(key + ": expected a number, got '" + text + "'");
    }
    return v;
}

long long to_integer(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ValidationError(key + ": expected an integer, got '" + text + "'");
    }
    return v;
}

int to_int(const std::string& key, const std::string& text)
{
    const long long v = to_integer(key, text);
    if (v < -1000000000LL || v > 1000000000LL) throw ValidationError(key + ": value out of range");
    return static_cast<int>(v);
}

Point to_point(const std::string& key, const std::string& text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 2) throw ValidationError(key + ": expected 'x,y', got '" + text + "'");
    return {to_double(key, parts[0]), to_double(key, parts[1])};
}

std::string fmt(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fmt(const Point& p) { return fmt(p.x()) + "," + fmt(p.y()); }

template <class T, class F>
std::string join(const std::vector<T>& v, const std::string& sep, F f)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + f(v[i]);
    return s;
}

struct Entry {
    const char* key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string& key, const std::string& value)> set;
};

Entry material_entry(const char* key, double MaterialParams::*field)
{
    return {key, [field](const RunConfig& c) { return fmt(c.material.*field); },
            [field](RunConfig& c, const std::string& k, const std::string& v) { c.material.*field = to_double(k, v); }};
}

const std::vector<Entry>& schema()
{
    static const std::vector<Entry> entries = {
        {"material.preset", [](const RunConfig& c) { return c.preset; },
         [](RunConfig& c, const std::string&, const std::string& v) { c.preset = trim(v); }},
        {"material.eta", [](const RunConfig& c) { return fmt(c.eta); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.eta = to_double(k, v); }},
        material_entry("material.rho11", &MaterialParams::rho11),
        material_entry("material.rho12", &MaterialParams::rho12),
        material_entry("material.rho22", &MaterialParams::rho22),
        material_entry("material.mu", &MaterialParams::mu),
        material_entry("material.lambda", &MaterialParams::lambda),
        material_entry("material.s", &MaterialParams::s),
        material_entry("material.alpha", &MaterialParams::alpha),
        material_entry("material.beta", &MaterialParams::beta),
        {"mesh.n", [](const RunConfig& c) { return std::to_string(c.n); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.n = to_int(k, v); }},
        {"mesh.levels", [](const RunConfig& c) { return std::to_string(c.levels); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.levels = to_int(k, v); }},
        {"mesh.diagonal", [](const RunConfig& c) { return std::string(c.diagonal == DiagonalRule::up ? "up" : "down"); },
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const std::string t = trim(v);
             if (t == "up") c.diagonal = DiagonalRule::up;
             else if (t == "down") c.diagonal = DiagonalRule::down;
             else throw ValidationError(k + ": expected 'up' or 'down', got '" + v + "'");
         }},
        {"discretization.k", [](const RunConfig& c) { return std::to_string(c.k); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.k = to_int(k, v); }},
        {"discretization.degrees",
         [](const RunConfig& c) { return join(c.degrees, ",", [](int d) { return std::to_string(d); }); },
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.degrees.clear();
             for (const auto& part : split(v, ',')) c.degrees.push_back(to_int(k, part));
         }},
        {"discretization.fluid_bc", [](const RunConfig& c) { return std::string(c.fluid_normal_only ? "normal" : "full"); },
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const std::string t = trim(v);
             if (t == "full") c.fluid_normal_only = false;
             else if (t == "normal") c.fluid_normal_only = true;
             else throw ValidationError(k + ": expected 'full' or 'normal', got '" + v + "'");
         }},
        {"time.T", [](const RunConfig& c) { return fmt(c.T); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.T = to_double(k, v); }},
        {"time.dt", [](const RunConfig& c) { return fmt(c.dt); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.dt = to_double(k, v); }},
        {"time.min_steps", [](const RunConfig& c) { return std::to_string(c.min_steps); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.min_steps = to_int(k, v); }},
        {"time.steps", [](const RunConfig& c) { return join(c.steps, ",", [](int d) { return std::to_string(d); }); },
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.steps.clear();
             for (const auto& part : split(v, ',')) c.steps.push_back(to_int(k, part));
         }},
        {"energy.steps", [](const RunConfig& c) { return std::to_string(c.energy_steps); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.energy_steps = to_int(k, v); }},
        {"run.seed", [](const RunConfig& c) { return std::to_string(c.seed); },
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const long long s = to_integer(k, v);
             if (s < 0) throw ValidationError(k + ": must be nonnegative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
        {"wave.length", [](const RunConfig& c) { return fmt(c.wave.length); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.wave.length = to_double(k, v); }},
        {"wave.f0", [](const RunConfig& c) { return fmt(c.wave.source.f0); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.wave.source.f0 = to_double(k, v); }},
        {"wave.t0", [](const RunConfig& c) { return fmt(c.wave.source.t0); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.wave.source.t0 = to_double(k, v); }},
        {"wave.amplitude", [](const RunConfig& c) { return fmt(c.wave.source.amplitude); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.wave.source.amplitude = to_double(k, v); }},
        {"wave.source", [](const RunConfig& c) { return fmt(c.wave.source.position); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.wave.source.position = to_point(k, v); }},
        {"wave.source_radius", [](const RunConfig& c) { return fmt(c.wave.source_radius); },
         [](RunConfig& c, const std::string& k, const std::string& v) { c.wave.source_radius = to_double(k, v); }},
        {"wave.receivers", [](const RunConfig& c) { return join(c.wave.receivers, ";", [](const Point& p) { return fmt(p); }); },
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.wave.receivers.clear();
             if (trim(v).empty()) return;
             for (const auto& part : split(v, ';')) c.wave.receivers.push_back(to_point(k, part));
         }},
        {"wave.snapshots", [](const RunConfig& c) { return join(c.wave.snapshot_times, ",", [](double t) { return fmt(t); }); },
         [](RunConfig& c, const std::string& k, const std::string& v) {
             c.wave.snapshot_times.clear();
             if (trim(v).empty()) return;
             for (const auto& part : split(v, ',')) c.wave.snapshot_times.push_back(to_double(k, part));
         }},
        {"wave.absorbing",
         [](const RunConfig& c) { return std::string(c.wave.absorbing == AbsorbingModel::diagonal ? "diagonal" : "coupled"); },
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const std::string t = trim(v);
             if (t == "diagonal") c.wave.absorbing = AbsorbingModel::diagonal;
             else if (t == "coupled") c.wave.absorbing = AbsorbingModel::coupled;
             else throw ValidationError(k + ": expected 'diagonal' or 'coupled', got '" + v + "'");
         }},
        {"output.dir", [](const RunConfig& c) { return c.out.string(); },
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (trim(v).empty()) throw ValidationError(k + ": must not be empty");
             c.out = trim(v);
         }},
    };
    return entries;
}

const Entry* find_entry(const std::string& key)
{
    for (const auto& e : schema()) {
        if (key == e.key) return &e;
    }
    return nullptr;
}

std::size_t edit_distance(const std::string& a, const std::string& b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

void apply_defaults(RunConfig& c)
{
    switch (c.command) {
    case Command::convergence_h:
        c.n = 4;
        c.levels = 4;
        c.k = 1;
        c.T = 0.3;
        break;
    case Command::convergence_dt:
        c.n = 8;
        c.k = 4;
        c.T = 1.0;
        c.steps = {16, 32, 64, 128};
        break;
    case Command::convergence_p:
        c.n = 4;
        c.degrees = {2, 3, 4, 5};
        c.T = 0.3;
        c.dt = 1e-4;
        break;
    case Command::energy_test:
        c.n = 4;
        c.k = 1;
        c.dt = 0.01;
        break;
    case Command::wave:
        c.preset = "coeffs";
        c.n = c.wave.n;
        c.k = c.wave.k;
        c.dt = c.wave.dt;
        c.T = c.wave.T;
        break;
    }
}

void validate(const RunConfig& c)
{
    c.material.validate();
    if (c.n < 1) throw ValidationError("mesh.n: must be positive");
    if (c.k < 0 || c.k > 10) throw ValidationError("discretization.k: must lie in [0, 10]");
    if (!(c.T > 0.0)) throw ValidationError("time.T: must be positive");
    switch (c.command) {
    case Command::convergence_h:
        if (c.levels < 3) throw ValidationError("mesh.levels: at least 3 levels are needed for a rate");
        if (c.min_steps < 1) throw ValidationError("time.min_steps: must be positive");
        break;
    case Command::convergence_dt:
        if (c.steps.size() < 2) throw ValidationError("time.steps: at least two step counts are needed");
        for (std::size_t i = 0; i < c.steps.size(); ++i) {
            if (c.steps[i] < 1 || (i > 0 && c.steps[i] <= c.steps[i - 1])) {
                throw ValidationError("time.steps: must be positive and strictly increasing");
            }
        }
        break;
    case Command::convergence_p:
        if (c.degrees.size() < 2) throw ValidationError("discretization.degrees: at least two degrees are needed");
        for (int d : c.degrees) {
            if (d < 0 || d > 10) throw ValidationError("discretization.degrees: each degree must lie in [0, 10]");
        }
        if (!(c.dt > 0.0)) throw ValidationError("time.dt: must be positive");
        break;
    case Command::energy_test:
        if (!(c.dt > 0.0)) throw ValidationError("time.dt: must be positive");
        if (c.energy_steps < 1) throw ValidationError("energy.steps: must be positive");
        break;
    case Command::wave:
        if (!(c.dt > 0.0)) throw ValidationError("time.dt: must be positive");
        if (!(c.wave.length > 0.0)) throw ValidationError("wave.length: must be positive");
        if (!(c.wave.source.f0 > 0.0)) throw ValidationError("wave.f0: must be positive");
        if (!c.material.provenance) {
            throw ValidationError("material.preset: the wave benchmark needs physical data (preset coeffs)");
        }
        break;
    }
}

}  // namespace

std::vector<std::string> schema_keys()
{
    std::vector<std::string> keys;
    for (const auto& e : schema()) keys.emplace_back(e.key);
    return keys;
}

std::string suggest_key(const std::string& unknown)
{
    std::string best;
    std::size_t best_d = 4;
    for (const auto& e : schema()) {
        const std::size_t d = edit_distance(unknown, e.key);
        if (d < best_d) {
            best_d = d;
            best = e.key;
        }
    }
    return best;
}

RunConfig build_config(Command command, const KeyValues& values)
{
    for (const auto& [key, value] : values) {
        if (find_entry(key)) continue;
        const std::string hint = suggest_key(key);
        throw ValidationError("unknown key '" + key + "'" + (hint.empty() ? "" : " (did you mean '" + hint + "'?)"));
    }
    RunConfig c;
    c.command = command;
    apply_defaults(c);
    for (const char* first : {"material.preset", "material.eta"}) {
        const auto it = values.find(first);
        if (it != values.end()) find_entry(first)->set(c, first, it->second);
    }
    c.material = material_preset(c.preset, c.eta);
    if (c.eta != 0.0 && !c.material.provenance) {
        throw ValidationError("material.eta: preset '" + c.preset + "' has no physical data; set material.beta instead");
    }
    for (const auto& [key, value] : values) {
        if (key == "material.preset" || key == "material.eta") continue;
        find_entry(key)->set(c, key, value);
    }
    validate(c);
    c.wave.n = c.n;
    c.wave.k = c.k;
    c.wave.dt = c.dt;
    c.wave.T = c.T;
    c.wave.diagonal = c.diagonal;
    c.wave.output_dir = c.out;
    return c;
}

KeyValues RunConfig::resolved() const
{
    KeyValues kv;
    for (const auto& e : schema()) kv[e.key] = e.get(*this);
    return kv;
}

std::uint64_t RunConfig::hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [k, v] : resolved()) {
        if (k == "output.dir") continue;  // where results go is not part of what is computed
        for (char ch : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(ch);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

}  // namespace porohdg
