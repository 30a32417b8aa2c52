// Command-line front end: builds a RunConfig from files and flags, then runs it.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cos2phi/cli.hpp"
#include "cos2phi/error.hpp"

namespace {

using cos2phi::RunConfig;

struct CircuitFlags {
    std::string params_file;
    std::string noise_file;
    std::optional<double> ec, ejs1, ejs2, ratio, ejs2_over_ec, d, d1, d2, dphi, ng;
    std::optional<int> n_trunc;
    std::optional<double> a_phi, a_ng, q_cap, temperature;
    std::optional<std::string> charge_units, flux_statistics;
    bool second_order = false;
};

struct OutputFlags {
    std::string config_file;
    std::optional<std::string> output;
    std::optional<std::string> format;
    bool plot = false;
    bool allow_degenerate = false;
    bool dump_config = false;
};

// Subcommand options copied verbatim into RunConfig::options.
struct Extras {
    std::map<std::string, std::optional<double>> numbers;
    std::map<std::string, std::optional<int>> integers;
    std::map<std::string, std::optional<std::string>> strings;
    std::map<std::string, bool> switches;
};

nlohmann::json read_json(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw cos2phi::InvalidArgument("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw cos2phi::SchemaError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void add_circuit_flags(CLI::App* app, CircuitFlags& f)
{
    app->add_option("--params", f.params_file, "Circuit parameters JSON");
    app->add_option("--noise", f.noise_file, "Noise specification JSON");
    app->add_option("--ec", f.ec, "Charging energy (GHz)");
    app->add_option("--ejs1", f.ejs1, "First-harmonic energy (GHz)");
    app->add_option("--ejs2", f.ejs2, "Second-harmonic energy (GHz)");
    app->add_option("--ratio", f.ratio, "ejs2/ejs1 (default -0.1)");
    app->add_option("--ejs2-over-ec", f.ejs2_over_ec, "Sets ejs2 = value * ec");
    app->add_option("--d", f.d, "Junction asymmetry for both harmonics");
    app->add_option("--d1", f.d1, "First-harmonic asymmetry");
    app->add_option("--d2", f.d2, "Second-harmonic asymmetry");
    app->add_option("--dphi", f.dphi, "Flux offset from half a flux quantum");
    app->add_option("--ng", f.ng, "Offset charge (Cooper pairs)");
    app->add_option("--n-trunc", f.n_trunc, "Charge basis halfwidth (default: converged)");
    app->add_option("--a-phi", f.a_phi, "1/f flux amplitude (flux quanta)");
    app->add_option("--a-ng", f.a_ng, "1/f charge amplitude");
    app->add_option("--q-cap", f.q_cap, "Dielectric quality factor");
    app->add_option("--temperature", f.temperature, "Temperature (K)");
    app->add_option("--charge-units", f.charge_units, "cooper_pairs or electrons");
    app->add_option("--flux-statistics", f.flux_statistics, "symmetrized or bose");
    app->add_flag("--second-order", f.second_order, "Add second-order 1/f dephasing");
}

void add_output_flags(CLI::App* app, OutputFlags& f)
{
    app->add_option("--config", f.config_file, "Run configuration JSON (flags override it)");
    app->add_option("-o,--output", f.output, "Output file (default: stdout)");
    app->add_option("--format", f.format, "csv or json");
    app->add_flag("--plot", f.plot, "Also write a plotting script next to the output");
    app->add_flag("--allow-degenerate", f.allow_degenerate, "Exit 0 even if degenerate levels occur");
    app->add_flag("--dump-config", f.dump_config, "Print the resolved run configuration and exit");
}

void number(CLI::App* app, Extras& e, const std::string& flag, const std::string& key, const std::string& help)
{
    app->add_option(flag, e.numbers[key], help);
}

void integer(CLI::App* app, Extras& e, const std::string& flag, const std::string& key, const std::string& help)
{
    app->add_option(flag, e.integers[key], help);
}

void text(CLI::App* app, Extras& e, const std::string& flag, const std::string& key, const std::string& help)
{
    app->add_option(flag, e.strings[key], help);
}

void toggle(CLI::App* app, Extras& e, const std::string& flag, const std::string& key, const std::string& help)
{
    app->add_flag(flag, e.switches[key], help);
}

void apply(const CircuitFlags& f, RunConfig& c)
{
    if (!f.params_file.empty()) c.params = read_json(f.params_file).get<cos2phi::CircuitParams>();
    if (!f.noise_file.empty()) c.noise = read_json(f.noise_file).get<cos2phi::NoiseSpec>();
    auto& p = c.params;
    const double ratio = f.ratio.value_or(p.ejs1 != 0.0 ? p.ejs2 / p.ejs1 : -0.1);
    if (f.ec) p.ec = *f.ec;
    if (f.ejs2) p.ejs2 = *f.ejs2;
    if (f.ejs2_over_ec) p.ejs2 = *f.ejs2_over_ec * p.ec;
    if (f.ejs1) {
        p.ejs1 = *f.ejs1;
    } else if (f.ratio || f.ejs2 || f.ejs2_over_ec) {
        if (ratio == 0.0) throw cos2phi::InvalidArgument("--ratio must be nonzero");
        p.ejs1 = p.ejs2 / ratio;
    }
    if (f.d) p.d1 = p.d2 = *f.d;
    if (f.d1) p.d1 = *f.d1;
    if (f.d2) p.d2 = *f.d2;
    if (f.dphi) p.dphi = *f.dphi;
    if (f.ng) p.ng = *f.ng;
    if (f.n_trunc) p.n_trunc = *f.n_trunc;
    auto& n = c.noise;
    if (f.a_phi) n.a_phi = *f.a_phi;
    if (f.a_ng) n.a_ng = *f.a_ng;
    if (f.q_cap) n.q_cap = *f.q_cap;
    if (f.temperature) n.temperature = *f.temperature;
    if (f.charge_units || f.flux_statistics) {
        nlohmann::json j = n;
        if (f.charge_units) j["charge_units"] = *f.charge_units;
        if (f.flux_statistics) j["flux_statistics"] = *f.flux_statistics;
        n = j.get<cos2phi::NoiseSpec>();
    }
    if (f.second_order) n.second_order = true;
}

void apply(const Extras& e, RunConfig& c)
{
    for (const auto& [k, v] : e.numbers) {
        if (v) c.options[k] = *v;
    }
    for (const auto& [k, v] : e.integers) {
        if (v) c.options[k] = *v;
    }
    for (const auto& [k, v] : e.strings) {
        if (v) c.options[k] = *v;
    }
    for (const auto& [k, v] : e.switches) {
        if (v) c.options[k] = true;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical laboratory for interference-based cos(2 phi) qubits"};
    app.require_subcommand(1);

    CircuitFlags circuit;
    OutputFlags output;
    std::map<std::string, Extras> extras;

    struct Spec {
        const char* name;
        const char* help;
    };
    const Spec specs[] = {
        {"spectrum", "Lowest energies vs ng or dphi"},
        {"elements", "Matrix elements, parity and symmetry diagnostics"},
        {"coherence", "T1, Tphi and T2 estimates"},
        {"thermal", "Multilevel rate matrix and effective qubit rates"},
        {"semiclassics", "Inter-well tunnelling model"},
        {"cpr", "Josephson harmonics of junction models"},
        {"sweep", "Grid sweep over (ejs2, ec, dphi)"},
        {"optimize", "Maximize T2 over the parameter envelope"},
        {"figures", "Data tables (and plot scripts) for figures"},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& s : specs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        add_circuit_flags(sub, circuit);
        add_output_flags(sub, output);
        subs[s.name] = sub;
    }

    auto& sp = extras["spectrum"];
    text(subs["spectrum"], sp, "--sweep", "sweep", "ng, dphi or none");
    number(subs["spectrum"], sp, "--from", "from", "Sweep start");
    number(subs["spectrum"], sp, "--to", "to", "Sweep end");
    integer(subs["spectrum"], sp, "--points", "points", "Sweep points");
    integer(subs["spectrum"], sp, "--levels", "levels", "Number of levels");

    auto& el = extras["elements"];
    text(subs["elements"], el, "--sweep", "sweep", "none, dphi or d (log spaced)");
    number(subs["elements"], el, "--from", "from", "Sweep start");
    number(subs["elements"], el, "--to", "to", "Sweep end");
    integer(subs["elements"], el, "--points", "points", "Sweep points");

    auto& co = extras["coherence"];
    text(subs["coherence"], co, "--sweep", "sweep", "none or dphi (log spaced)");
    number(subs["coherence"], co, "--from", "from", "Sweep start");
    number(subs["coherence"], co, "--to", "to", "Sweep end");
    integer(subs["coherence"], co, "--points", "points", "Sweep points");
    toggle(subs["coherence"], co, "--thermal", "thermal", "Multilevel thermal reduction");
    integer(subs["coherence"], co, "--n-levels", "n_levels", "Levels in the thermal reduction");
    toggle(subs["coherence"], co, "--thermal-dephasing", "thermal_dephasing", "Include leakage in the coherence rate");

    auto& th = extras["thermal"];
    integer(subs["thermal"], th, "--n-levels", "n_levels", "Levels in the rate matrix");

    auto& sc = extras["semiclassics"];
    number(subs["semiclassics"], sc, "--span", "span", "Half-width of the dphi curve in units of the sweetness");
    integer(subs["semiclassics"], sc, "--points", "points", "Curve points");

    auto& cp = extras["cpr"];
    text(subs["cpr"], cp, "--model", "model", "transparent, rhombus, kite, flowermon or table");
    number(subs["cpr"], cp, "--tau", "tau", "Channel transparency");
    number(subs["cpr"], cp, "--eta", "eta", "Rhombus asymmetry");
    number(subs["cpr"], cp, "--ej", "ej", "KITE junction energy");
    number(subs["cpr"], cp, "--el", "el", "KITE inductive energy");
    number(subs["cpr"], cp, "--theta-deg", "theta_deg", "Flowermon twist angle (degrees)");
    number(subs["cpr"], cp, "--ek-over-ej", "ek_over_ej", "Flowermon coupling ratio");
    integer(subs["cpr"], cp, "--harmonics", "harmonics", "Highest harmonic");

    for (const char* name : {"sweep", "optimize"}) {
        auto& sw = extras[name];
        auto* sub = subs[name];
        number(sub, sw, "--grid-ratio", "ratio", "ejs2/ejs1 for the grid (default: --ratio)");
        integer(sub, sw, "--n-ejs2", "n_ejs2", "ejs2 axis points");
        integer(sub, sw, "--n-ec", "n_ec", "ec axis points");
        integer(sub, sw, "--n-dphi", "n_dphi", "dphi axis points");
        integer(sub, sw, "--workers", "workers", "Worker threads (default: COS2PHI_WORKERS or all cores)");
        toggle(sub, sw, "--no-thermal", "no_thermal", "Disable the multilevel thermal reduction");
    }
    auto& sw = extras["sweep"];
    toggle(subs["sweep"], sw, "--full", "full", "Use the 401 x 401 x 101 grid");
    integer(subs["sweep"], sw, "--chunk-size", "chunk_size", "Cells per checkpoint chunk");
    text(subs["sweep"], sw, "--checkpoint-dir", "checkpoint_dir", "Directory for resumable chunk files");
    integer(subs["sweep"], sw, "--max-new-chunks", "max_new_chunks", "Stop after this many new chunks");
    text(subs["sweep"], sw, "--grid", "grid_file", "Sweep grid JSON");

    auto& op = extras["optimize"];
    number(subs["optimize"], op, "--target-f01", "target_f01", "Fix the qubit frequency (GHz)");
    for (const char* b : {"ejs2_lo", "ejs2_hi", "ec_lo", "ec_hi", "dphi_lo", "dphi_hi"}) {
        std::string flag = std::string("--") + b;
        std::replace(flag.begin(), flag.end(), '_', '-');
        number(subs["optimize"], op, flag, b, "Search bound");
    }

    auto& fg = extras["figures"];
    std::optional<std::string> figure;
    subs["figures"]->add_option("figure", figure, "fig4, fig5, fig6, fig7, fig8 or fig9")->required();
    integer(subs["figures"], fg, "--points", "points", "Samples per curve");
    text(subs["figures"], fg, "--sweep-csv", "sweep_csv", "Existing sweep CSV for fig9");
    integer(subs["figures"], fg, "--workers", "workers", "Worker threads for fig9");
    number(subs["figures"], fg, "--grid-ratio", "ratio", "ejs2/ejs1 for the fig9 sweep");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const auto* chosen = app.get_subcommands().front();
        const std::string name = chosen->get_name();
        // Circuit flags also feed the dimensionless figure ratio.
        if (name == "figures" && circuit.ejs2_over_ec) {
            extras["figures"].numbers["ejs2_over_ec"] = circuit.ejs2_over_ec;
        }
        RunConfig config;
        if (!output.config_file.empty()) config = read_json(output.config_file).get<RunConfig>();
        config.subcommand = cos2phi::parse_subcommand(name);
        apply(circuit, config);
        apply(extras[name], config);
        if (figure) config.options["figure"] = *figure;
        if (config.options.contains("no_thermal")) {
            config.options.erase("no_thermal");
            config.options["thermal"] = false;
        }
        if (config.options.contains("grid_file")) {
            config.options["grid"] = read_json(config.options["grid_file"].get<std::string>());
            config.options.erase("grid_file");
        }
        if (output.output) config.output_path = *output.output;
        if (output.format) config.format = cos2phi::parse_format(*output.format);
        if (output.plot) config.plot = true;
        if (output.allow_degenerate) config.allow_degenerate = true;
        if (output.dump_config) {
            std::cout << nlohmann::json(config).dump(2) << '\n';
            return cos2phi::exit_code::ok;
        }
        return cos2phi::run(config, std::cout, std::cerr);
    } catch (const cos2phi::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cos2phi::exit_code::usage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cos2phi::exit_code::usage;
    }
}
