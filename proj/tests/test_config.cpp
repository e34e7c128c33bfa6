#include "porohdg/config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace porohdg;

namespace {

std::string error_of(Command c, const KeyValues& kv)
{
    try {
        build_config(c, kv);
    } catch (const ValidationError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST(Config, CommandNames)
{
    for (auto c : {Command::convergence_h, Command::convergence_dt, Command::convergence_p, Command::energy_test,
                   Command::wave}) {
        EXPECT_EQ(parse_command(to_string(c)), c);
    }
    EXPECT_THROW(parse_command("convergence-x"), ValidationError);
}

TEST(Config, MinimalConvergenceDefaults)
{
    const RunConfig c = build_config(Command::convergence_h, {{"material.preset", "L1"}});
    EXPECT_EQ(c.T, 0.3);
    EXPECT_EQ(c.k, 1);
    EXPECT_EQ(c.n, 4);
    EXPECT_EQ(c.levels, 4);
    EXPECT_EQ(c.min_steps, 20);
    EXPECT_FALSE(c.fluid_normal_only);
    EXPECT_EQ(c.material.lambda, 100.0);
    EXPECT_EQ(c.resolved().at("time.T"), "0.3");
}

TEST(Config, CommandSpecificDefaults)
{
    const RunConfig dt = build_config(Command::convergence_dt, {});
    EXPECT_EQ(dt.T, 1.0);
    EXPECT_EQ(dt.steps, (std::vector<int>{16, 32, 64, 128}));
    const RunConfig p = build_config(Command::convergence_p, {});
    EXPECT_EQ(p.degrees, (std::vector<int>{2, 3, 4, 5}));
    EXPECT_EQ(p.dt, 1e-4);
    const RunConfig w = build_config(Command::wave, {{"material.eta", "0.0015"}});
    EXPECT_EQ(w.preset, "coeffs");
    EXPECT_NEAR(w.material.beta, 1.5e9, 1.0);
    EXPECT_EQ(w.wave.n, 48);
    EXPECT_EQ(w.wave.k, 3);
    EXPECT_EQ(w.wave.dt, 0.005);
    EXPECT_EQ(w.wave.T, 1.2);
}

TEST(Config, NegativeLambdaNamesKey)
{
    EXPECT_NE(error_of(Command::convergence_h, {{"material.lambda", "-1"}}).find("material.lambda"), std::string::npos);
}

TEST(Config, UnknownKeySuggestion)
{
    const std::string e = error_of(Command::convergence_h, {{"material.lamda", "3"}});
    EXPECT_NE(e.find("material.lamda"), std::string::npos);
    EXPECT_NE(e.find("material.lambda"), std::string::npos);
    EXPECT_EQ(suggest_key("material.lamda"), "material.lambda");
    EXPECT_EQ(suggest_key("completely.unrelated"), "");
}

TEST(Config, InvalidValues)
{
    EXPECT_FALSE(error_of(Command::convergence_h, {{"discretization.k", "two"}}).empty());
    EXPECT_FALSE(error_of(Command::convergence_h, {{"mesh.levels", "2"}}).empty());
    EXPECT_FALSE(error_of(Command::convergence_h, {{"mesh.diagonal", "sideways"}}).empty());
    EXPECT_FALSE(error_of(Command::convergence_h, {{"discretization.fluid_bc", "tangent"}}).empty());
    EXPECT_FALSE(error_of(Command::convergence_h, {{"material.eta", "0.1"}}).empty());  // L1 has no provenance
    EXPECT_FALSE(error_of(Command::wave, {{"wave.receivers", "1,2,3"}}).empty());
}

TEST(Config, OverridesAndToggle)
{
    const RunConfig c = build_config(Command::convergence_h, {{"discretization.fluid_bc", "normal"},
                                                              {"material.mu", "20"},
                                                              {"mesh.diagonal", "down"}});
    EXPECT_TRUE(c.fluid_normal_only);
    EXPECT_EQ(c.material.mu, 20.0);
    EXPECT_EQ(c.diagonal, DiagonalRule::down);
    EXPECT_EQ(c.resolved().at("discretization.fluid_bc"), "normal");
}

TEST(Config, HashIgnoresOutputDir)
{
    const RunConfig a = build_config(Command::convergence_h, {{"output.dir", "x"}});
    const RunConfig b = build_config(Command::convergence_h, {{"output.dir", "y"}});
    const RunConfig c = build_config(Command::convergence_h, {{"discretization.k", "2"}});
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_NE(a.hash(), c.hash());
    for (const auto& key : schema_keys()) EXPECT_TRUE(a.resolved().count(key)) << key;
}

TEST(Config, ReadIni)
{
    const auto path = std::filesystem::temp_directory_path() / "porohdg_test.ini";
    std::ofstream(path) << "; comment\n[material]\npreset = L2\n\n[mesh]\nn = 2\n[wave]\nreceivers = 100,200;300,400\n";
    const KeyValues kv = read_ini(path);
    EXPECT_EQ(kv.at("material.preset"), "L2");
    EXPECT_EQ(kv.at("mesh.n"), "2");
    const RunConfig c = build_config(Command::wave, {{"wave.receivers", kv.at("wave.receivers")}});
    ASSERT_EQ(c.wave.receivers.size(), 2u);
    EXPECT_EQ(c.wave.receivers[1], Point(300, 400));
    std::filesystem::remove(path);

    std::ofstream(path) << "[material\npreset = L1\n";
    EXPECT_THROW(read_ini(path), ParseError);
    std::filesystem::remove(path);
    EXPECT_THROW(read_ini(path), Error);
}
