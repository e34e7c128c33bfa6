#pragma once

#include "porohdg/materials.hpp"
#include "porohdg/mesh.hpp"
#include "porohdg/wavebench.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace porohdg {

enum class Command { convergence_h, convergence_dt, convergence_p, energy_test, wave };

/// Throws ValidationError for an unknown name.
Command parse_command(const std::string& name);
std::string to_string(Command c);

/// Flat `section.key -> value` text.
using KeyValues = std::map<std::string, std::string>;

/// Reads an INI file (`[section]` headers, `key = value` lines, `;` or `#`
/// comments) into flat keys. Throws ParseError on malformed text or a
/// duplicate key, Error when the file cannot be read.
KeyValues read_ini(const std::filesystem::path& path);

/// Fully resolved run configuration. Defaults depend on the command.
struct RunConfig {
    Command command = Command::convergence_h;

    std::string preset = "L1";
    double eta = 0.0;
    MaterialParams material;

    int n = 4;  ///< base mesh (n x n squares, two triangles each)
    int levels = 4;
    DiagonalRule diagonal = DiagonalRule::up;

    int k = 1;
    std::vector<int> degrees;  ///< p study
    bool fluid_normal_only = false;  ///< manufactured runs: prescribe u_f . n only

    double T = 0.3;
    double dt = 0.0;                 ///< p study, energy test and wave
    int min_steps = 20;              ///< h study: steps on the coarsest level
    std::vector<int> steps;          ///< dt study
    int energy_steps = 200;
    std::uint64_t seed = 1;

    WaveConfig wave;  ///< n, k, dt, T mirrored from the fields above
    std::filesystem::path out = "porohdg-out";

    /// Every schema key with its effective value (defaults included).
    KeyValues resolved() const;
    /// FNV-1a 64 of the resolved `key=value` lines, output.dir excluded.
    std::uint64_t hash() const;
};

/// Applies `command` defaults, then `values` in key order (material.preset and
/// material.eta first). Throws ValidationError naming the key for an unknown
/// key (with the nearest known key as a suggestion) or an invalid value.
RunConfig build_config(Command command, const KeyValues& values);

/// Closest schema key within edit distance 3, or empty.
std::string suggest_key(const std::string& unknown);

std::vector<std::string> schema_keys();

}  // namespace porohdg
