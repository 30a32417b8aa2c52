#include "cos2phi/cli.hpp"
#include "cos2phi/error.hpp"
#include "cos2phi/figures.hpp"
#include "cos2phi/noise.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

using namespace cos2phi;
namespace fs = std::filesystem;

namespace {

struct Captured {
    int status = 0;
    std::string out;
    std::string err;
};

Captured invoke(const RunConfig& c)
{
    std::ostringstream out;
    std::ostringstream err;
    const int status = run(c, out, err);
    return {status, out.str(), err.str()};
}

// Runs the installed command line and returns (exit status, stdout).
std::pair<int, std::string> shell(const std::string& args)
{
    const std::string cmd = std::string(COS2PHI_CLI) + " " + args + " 2>/dev/null";
    std::string text;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) return {-1, {}};
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) text += buf.data();
    const int raw = ::pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, text};
}

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("cos2phi_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST(Cli, SubcommandNames)
{
    for (const char* name : {"spectrum", "elements", "coherence", "thermal", "semiclassics", "cpr", "sweep", "optimize", "figures"})
        EXPECT_EQ(to_string(parse_subcommand(name)), name);
    EXPECT_THROW(parse_subcommand("plot"), SchemaError);
    EXPECT_THROW(parse_format("xml"), SchemaError);
}

TEST(Cli, DefaultFormats)
{
    RunConfig c;
    c.subcommand = Subcommand::sweep;
    EXPECT_EQ(c.resolved_format(), OutputFormat::csv);
    c.subcommand = Subcommand::figures;
    EXPECT_EQ(c.resolved_format(), OutputFormat::csv);
    c.subcommand = Subcommand::coherence;
    EXPECT_EQ(c.resolved_format(), OutputFormat::json);
    c.subcommand = Subcommand::thermal;
    EXPECT_EQ(c.resolved_format(), OutputFormat::json);
    c.format = OutputFormat::csv;
    EXPECT_EQ(c.resolved_format(), OutputFormat::csv);
}

TEST(Cli, ConfigRoundTrip)
{
    RunConfig c;
    c.subcommand = Subcommand::sweep;
    c.params.ng = 0.3;
    c.noise.a_phi = 2e-6;
    c.output_path = "out/sweep.csv";
    c.format = OutputFormat::json;
    c.plot = true;
    c.options = {{"ratio", -5.0}, {"n_ejs2", 7}};
    const nlohmann::json j = c;
    EXPECT_EQ(j.get<RunConfig>(), c);
    EXPECT_EQ(nlohmann::json::parse(j.dump()).get<RunConfig>(), c);
    auto bad = j;
    bad["colour"] = "red";
    EXPECT_THROW((void)bad.get<RunConfig>(), SchemaError);
}

TEST(Cli, CoherenceReportReparses)
{
    RunConfig c;
    c.params.n_trunc = 30;
    const auto r = invoke(c);
    ASSERT_EQ(r.status, exit_code::ok) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    const auto report = doc.at("report").get<CoherenceReport>();
    EXPECT_EQ(nlohmann::json(report), doc.at("report"));
    EXPECT_EQ(doc.at("params").get<CircuitParams>(), c.params);
}

TEST(Cli, DegeneratePointExitStatus)
{
    RunConfig c;
    c.subcommand = Subcommand::spectrum;
    c.params = CircuitParams::from_ratio(0.5, 10.0, -0.1, 0.0, 0.0, 0.5, 30);
    c.options = {{"sweep", "none"}};
    EXPECT_EQ(invoke(c).status, exit_code::degenerate);
    c.allow_degenerate = true;
    EXPECT_EQ(invoke(c).status, exit_code::ok);
}

TEST(Cli, UsageErrors)
{
    RunConfig c;
    c.params.ec = -1.0;
    const auto r = invoke(c);
    EXPECT_EQ(r.status, exit_code::usage);
    EXPECT_NE(r.err.find("ec"), std::string::npos);
    c = RunConfig{};
    c.subcommand = Subcommand::figures;
    c.options = {{"figure", "fig42"}};
    EXPECT_EQ(invoke(c).status, exit_code::usage);
    c = RunConfig{};
    c.plot = true;
    EXPECT_EQ(invoke(c).status, exit_code::usage);
}

TEST(Cli, FigureFourCsv)
{
    RunConfig c;
    c.subcommand = Subcommand::figures;
    c.options = {{"figure", "fig4"}, {"points", 11}};
    const auto r = invoke(c);
    ASSERT_EQ(r.status, exit_code::ok) << r.err;
    std::istringstream in(r.out);
    const auto t = read_csv(in);
    EXPECT_EQ(t.rows.size(), 66U);
    for (const auto& col : required_columns("fig4")) EXPECT_NO_THROW((void)t.column(col));
}

TEST(Cli, OutputsAreIdempotent)
{
    const auto dir = scratch("idem");
    RunConfig c;
    c.subcommand = Subcommand::figures;
    c.options = {{"figure", "fig8"}, {"ejs2_over_ec", 20.0}, {"points", 7}};
    c.output_path = (dir / "fig8.csv").string();
    c.plot = true;
    ASSERT_EQ(invoke(c).status, exit_code::ok);
    const auto first = slurp(dir / "fig8.csv");
    const auto script = slurp(dir / "fig8.py");
    ASSERT_EQ(invoke(c).status, exit_code::ok);
    EXPECT_EQ(slurp(dir / "fig8.csv"), first);
    EXPECT_EQ(slurp(dir / "fig8.py"), script);
    EXPECT_NE(script.find("fig8.csv"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cli, SweepWritesSidecarAndMap)
{
    const auto dir = scratch("sweep");
    RunConfig c;
    c.subcommand = Subcommand::sweep;
    c.options = {{"ratio", -5.0}, {"n_ejs2", 3}, {"n_ec", 3}, {"n_dphi", 2}, {"workers", 2}};
    c.output_path = (dir / "map.csv").string();
    c.plot = true;
    c.allow_degenerate = true;
    ASSERT_EQ(invoke(c).status, exit_code::ok);
    const auto side = nlohmann::json::parse(slurp(dir / "map.json"));
    EXPECT_EQ(side.at("chunks_done"), side.at("chunks_total"));
    EXPECT_EQ(side.at("config_hash").get<std::string>().size(), 40U);
    EXPECT_TRUE(fs::exists(dir / "map.fig9.csv"));
    EXPECT_TRUE(fs::exists(dir / "map.py"));
    const auto csv = slurp(dir / "map.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
    fs::remove_all(dir);
}

TEST(Cli, BinaryCoherenceFromFiles)
{
    const auto dir = scratch("files");
    const auto p = CircuitParams::from_ratio(1.5, 15.7, -0.1, 0.01, 1e-5, 0.25);
    std::ofstream(dir / "p.json") << nlohmann::json(p).dump();
    std::ofstream(dir / "n.json") << nlohmann::json(NoiseSpec{}).dump();
    const auto [status, text] =
        shell("coherence --params " + (dir / "p.json").string() + " --noise " + (dir / "n.json").string());
    ASSERT_EQ(status, 0) << text;
    const auto doc = nlohmann::json::parse(text);
    const double tphi = doc.at("report").at("tphi_total").get<double>();
    EXPECT_TRUE(oracle::within_factor(tphi, 0.12e-6, 3.0)) << tphi;
    fs::remove_all(dir);
}

TEST(Cli, BinaryFlagsOverrideConfig)
{
    const auto dir = scratch("override");
    const auto [dump_status, dumped] = shell("coherence --ec 0.7 --ejs2-over-ec 12 --dphi 2e-5 --dump-config");
    ASSERT_EQ(dump_status, 0);
    std::ofstream(dir / "run.json") << dumped;
    const auto config = nlohmann::json::parse(dumped).get<RunConfig>();
    EXPECT_DOUBLE_EQ(config.params.ec, 0.7);
    EXPECT_DOUBLE_EQ(config.params.ejs2, 8.4);
    const auto [status, text] = shell("coherence --config " + (dir / "run.json").string() + " --dphi 3e-5 --dump-config");
    ASSERT_EQ(status, 0);
    const auto merged = nlohmann::json::parse(text).get<RunConfig>();
    EXPECT_DOUBLE_EQ(merged.params.dphi, 3e-5);
    EXPECT_DOUBLE_EQ(merged.params.ec, 0.7);
    fs::remove_all(dir);
}

TEST(Cli, BinaryUsageAndDegeneracy)
{
    EXPECT_EQ(shell("nonsense").first, 2);
    EXPECT_EQ(shell("spectrum --ng 0.5 --dphi 0 --d 0 --n-trunc 30 --sweep none").first, 3);
    EXPECT_EQ(shell("spectrum --ng 0.5 --dphi 0 --d 0 --n-trunc 30 --sweep none --allow-degenerate").first, 0);
    const auto [status, text] = shell("cpr --model transparent --tau 1 --format json");
    ASSERT_EQ(status, 0);
    EXPECT_NEAR(nlohmann::json::parse(text).at("ratio").get<double>(), -0.2, 1e-3);
}
