#include "cos2phi/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "cos2phi/cpr.hpp"
#include "cos2phi/elements.hpp"
#include "cos2phi/error.hpp"
#include "cos2phi/figures.hpp"
#include "cos2phi/semiclassics.hpp"
#include "cos2phi/spectrum.hpp"
#include "cos2phi/sweep.hpp"
#include "cos2phi/thermal.hpp"

namespace cos2phi {

namespace {

const std::map<std::string, Subcommand>& subcommand_names()
{
    static const std::map<std::string, Subcommand> m{
        {"spectrum", Subcommand::spectrum},   {"elements", Subcommand::elements}, {"coherence", Subcommand::coherence},
        {"thermal", Subcommand::thermal},     {"semiclassics", Subcommand::semiclassics}, {"cpr", Subcommand::cpr},
        {"sweep", Subcommand::sweep},         {"optimize", Subcommand::optimize}, {"figures", Subcommand::figures}};
    return m;
}

// Result of one subcommand before it is written out.
struct Output {
    std::optional<Table> table;
    nlohmann::json document;
    std::optional<std::string> plot_tag;
    std::optional<Table> plot_table;
    nlohmann::json sidecar;
    bool degenerate = false;
};

double opt_number(const nlohmann::json& o, const char* key, double fallback)
{
    if (!o.contains(key)) return fallback;
    if (!o.at(key).is_number()) throw SchemaError(std::string("option '") + key + "' must be a number");
    return o.at(key).get<double>();
}

int opt_int(const nlohmann::json& o, const char* key, int fallback)
{
    if (!o.contains(key)) return fallback;
    if (!o.at(key).is_number_integer()) throw SchemaError(std::string("option '") + key + "' must be an integer");
    return o.at(key).get<int>();
}

std::string opt_string(const nlohmann::json& o, const char* key, const std::string& fallback)
{
    if (!o.contains(key)) return fallback;
    if (!o.at(key).is_string()) throw SchemaError(std::string("option '") + key + "' must be a string");
    return o.at(key).get<std::string>();
}

bool opt_bool(const nlohmann::json& o, const char* key, bool fallback)
{
    if (!o.contains(key)) return fallback;
    if (!o.at(key).is_boolean()) throw SchemaError(std::string("option '") + key + "' must be a boolean");
    return o.at(key).get<bool>();
}

std::vector<double> linear_axis(double lo, double hi, int n)
{
    if (n < 2) return {lo};
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (n - 1);
    return v;
}

CircuitParams resolved(const RunConfig& c) { return with_converged_truncation(c.params); }

Output do_spectrum(const RunConfig& c)
{
    const auto& o = c.options;
    const auto p = resolved(c);
    const int levels = opt_int(o, "levels", 3);
    const std::string axis = opt_string(o, "sweep", "ng");
    Output out;
    Table t;
    t.columns = {axis == "dphi" ? "dphi" : "ng"};
    for (int k = 0; k < levels; ++k) t.columns.push_back("e" + std::to_string(k));
    std::vector<double> xs;
    if (axis == "ng") {
        xs = linear_axis(opt_number(o, "from", -1.0), opt_number(o, "to", 1.0), opt_int(o, "points", 101));
    } else if (axis == "dphi") {
        xs = linear_axis(opt_number(o, "from", -1e-3), opt_number(o, "to", 1e-3), opt_int(o, "points", 101));
    } else if (axis == "none") {
        xs = {axis == "dphi" ? p.dphi : p.ng};
    } else {
        throw SchemaError("spectrum option 'sweep' must be ng, dphi or none");
    }
    nlohmann::json points = nlohmann::json::array();
    for (double x : xs) {
        auto q = p;
        (axis == "dphi" ? q.dphi : q.ng) = x;
        const auto s = solve(q, levels);
        out.degenerate = out.degenerate || is_degenerate(s);
        std::vector<double> row{x};
        row.insert(row.end(), s.energies.begin(), s.energies.end());
        t.add(row);
        points.push_back({{"x", x}, {"energies_ghz", s.energies}, {"degenerate", is_degenerate(s)}});
    }
    out.document = {{"params", p}, {"axis", axis}, {"points", points}};
    out.table = std::move(t);
    return out;
}

Output do_elements(const RunConfig& c)
{
    const auto& o = c.options;
    const auto p = resolved(c);
    const std::string axis = opt_string(o, "sweep", "none");
    Output out;
    if (axis == "none") {
        const auto s = solve(p, 3);
        const auto m = matrix_elements(p, s);
        const auto w0 = parity_weights(s, 0);
        const auto w1 = parity_weights(s, 1);
        const auto sym0 = symmetry_metric(s, p.ng, 0);
        const auto sym1 = symmetry_metric(s, p.ng, 1);
        auto metric = [](const SymmetryMetric& m) {
            return nlohmann::json{{"even", m.even ? nlohmann::json(*m.even) : nlohmann::json(nullptr)},
                                  {"odd", m.odd ? nlohmann::json(*m.odd) : nlohmann::json(nullptr)}};
        };
        out.degenerate = m.degenerate;
        out.document = {{"params", p},
                        {"f01_ghz", transition_frequency(s, 0, 1)},
                        {"elements", m},
                        {"parity", {{"level0", {w0.even, w0.odd}}, {"level1", {w1.even, w1.odd}}}},
                        {"symmetry", {{"level0", metric(sym0)}, {"level1", metric(sym1)}}}};
        return out;
    }
    if (axis != "dphi" && axis != "d") throw SchemaError("elements option 'sweep' must be none, dphi or d");
    Table t{{axis, "f01_ghz", "m_n", "m_1phi", "m_2phi"}, {}};
    const auto xs = log_axis(opt_number(o, "from", axis == "d" ? 1e-4 : 1e-6),
                             opt_number(o, "to", axis == "d" ? 0.3 : 1e-1), opt_int(o, "points", 41));
    for (double x : xs) {
        auto q = p;
        if (axis == "dphi") {
            q.dphi = x;
        } else {
            q.d1 = q.d2 = x;
        }
        const auto s = solve(q, 2);
        const auto m = matrix_elements(q, s);
        out.degenerate = out.degenerate || m.degenerate;
        t.add({x, transition_frequency(s, 0, 1), m.m_n, m.m_1phi, m.m_2phi});
    }
    out.table = std::move(t);
    return out;
}

CoherenceOptions coherence_options(const nlohmann::json& o)
{
    CoherenceOptions co;
    co.thermal = opt_bool(o, "thermal", false);
    co.n_levels = opt_int(o, "n_levels", 4);
    co.thermal_dephasing = opt_bool(o, "thermal_dephasing", false);
    return co;
}

Output do_coherence(const RunConfig& c)
{
    const auto& o = c.options;
    const auto p = resolved(c);
    const auto co = coherence_options(o);
    Output out;
    const std::string axis = opt_string(o, "sweep", "none");
    if (axis == "none") {
        const auto r = coherence_report(p, c.noise, co);
        out.degenerate = r.degenerate;
        out.document = {{"params", p}, {"noise", c.noise}, {"report", r}};
        return out;
    }
    if (axis != "dphi") throw SchemaError("coherence option 'sweep' must be none or dphi");
    Table t{{"dphi", "tphi_s", "tphi_flux_s", "tphi_charge_s", "t1_s", "t1_flux_s", "t1_dielectric_s", "t2_s", "f01_ghz"}, {}};
    for (double dphi : log_axis(opt_number(o, "from", 1e-6), opt_number(o, "to", 1e-2), opt_int(o, "points", 41))) {
        auto q = p;
        q.dphi = dphi;
        const auto r = coherence_report(q, c.noise, co);
        out.degenerate = out.degenerate || r.degenerate;
        t.add({dphi, r.tphi_total, r.tphi_flux, r.tphi_charge, r.t1_effective, r.t1_flux, r.t1_dielectric, r.t2, r.f01});
    }
    out.plot_tag = "fig8";
    out.table = std::move(t);
    return out;
}

Output do_thermal(const RunConfig& c)
{
    const auto p = resolved(c);
    const int n = opt_int(c.options, "n_levels", 4);
    const auto s = solve(p, n);
    const auto rates = build_rate_matrix(p, s, c.noise);
    const auto eff = effective_qubit_rates(rates);
    Output out;
    out.degenerate = is_degenerate(s);
    out.document = {{"params", p},
                    {"noise", c.noise},
                    {"energies_ghz", s.energies},
                    {"rate_matrix", rates},
                    {"gamma1_eff_per_s", eff.gamma1},
                    {"gamma2_eff_per_s", eff.gamma2},
                    {"t1_eff_s", time_from_rate(eff.gamma1)}};
    return out;
}

Output do_semiclassics(const RunConfig& c)
{
    const auto& o = c.options;
    const auto p = resolved(c);
    const auto m = two_level_model(p);
    const double span = opt_number(o, "span", 5.0) * m.dphi_max;
    Output out;
    Table t{{"dphi", "model_f01_ghz", "f01_ghz", "kappa_ghz", "alpha_ghz", "dphi_max"}, {}};
    for (double dphi : linear_axis(-span, span, opt_int(o, "points", 81))) {
        auto q = p;
        q.dphi = dphi;
        const auto s = solve(q, 2);
        out.degenerate = out.degenerate || is_degenerate(s);
        t.add({dphi, two_level_f01(m, dphi), transition_frequency(s, 0, 1), m.kappa, m.alpha, m.dphi_max});
    }
    out.document = {{"params", p}, {"kappa_ghz", m.kappa}, {"alpha_ghz_per_phi0", m.alpha}, {"dphi_max", m.dphi_max}};
    out.table = std::move(t);
    return out;
}

Output do_cpr(const RunConfig& c)
{
    const auto& o = c.options;
    const std::string model = opt_string(o, "model", "table");
    const int order = opt_int(o, "harmonics", 8);
    Output out;
    auto series_output = [&](const HarmonicSeries& s) {
        Table t{{"m", "coefficient"}, {}};
        for (int m = 0; m <= s.order(); ++m) t.add({static_cast<double>(m), s[m]});
        out.table = std::move(t);
        out.document = s;
        const bool defined = s.order() >= 2 && s[1] != 0.0;
        out.document["ratio"] = defined ? nlohmann::json(s.ratio()) : nlohmann::json(nullptr);
    };
    if (model == "transparent") {
        series_output(transparent_junction_harmonics(opt_number(o, "tau", 1.0), order));
    } else if (model == "rhombus") {
        const double eta = opt_number(o, "eta", 0.0);
        series_output(rhombus_harmonics(eta, order));
        const auto e = rhombus_printed_expansion(eta);
        out.document["small_eta_expansion"] = {e.ej0, e.ej1, e.ej2};
    } else if (model == "kite") {
        out.document = {{"model", "kite"},
                        {"ratio", kite_small_inductance_ratio(opt_number(o, "ej", 0.1), opt_number(o, "el", 1.0))}};
    } else if (model == "flowermon") {
        const auto r = flowermon_ratio(opt_number(o, "theta_deg", 0.0) * std::numbers::pi / 180.0,
                                       opt_number(o, "ek_over_ej", 0.1));
        out.document = {{"model", "flowermon"}, {"ratio", r.pole ? nlohmann::json(nullptr) : nlohmann::json(r.value)},
                        {"pole", r.pole}};
    } else if (model == "table") {
        out.document = implementation_table();
    } else {
        throw SchemaError("cpr option 'model' must be transparent, rhombus, kite, flowermon or table");
    }
    return out;
}

SweepGrid sweep_grid(const RunConfig& c)
{
    const auto& o = c.options;
    if (o.contains("grid")) return o.at("grid").get<SweepGrid>();
    const double ratio = opt_number(o, "ratio", c.params.ratio());
    SweepGrid g = opt_bool(o, "full", false)
                      ? SweepGrid::full(ratio)
                      : SweepGrid::with_resolution(ratio, opt_int(o, "n_ejs2", 21), opt_int(o, "n_ec", 21),
                                                   opt_int(o, "n_dphi", 11));
    g.fixed.d = opt_number(o, "d", c.params.d1);
    g.fixed.ng = opt_number(o, "ng", c.params.ng);
    g.fixed.noise = c.noise;
    g.fixed.coherence.thermal = opt_bool(o, "thermal", true);
    g.fixed.coherence.n_levels = opt_int(o, "n_levels", 4);
    g.fixed.coherence.thermal_dephasing = opt_bool(o, "thermal_dephasing", false);
    return g;
}

Output do_sweep(const RunConfig& c)
{
    const auto& o = c.options;
    const auto grid = sweep_grid(c);
    SweepOptions so;
    so.workers = static_cast<unsigned>(opt_int(o, "workers", 0));
    so.chunk_size = static_cast<std::size_t>(opt_int(o, "chunk_size", 21));
    so.checkpoint_dir = opt_string(o, "checkpoint_dir", "");
    if (o.contains("max_new_chunks")) so.max_new_chunks = static_cast<std::size_t>(opt_int(o, "max_new_chunks", 0));
    const auto result = run_sweep(grid, so);

    Output out;
    std::ostringstream csv;
    write_sweep_csv(result, csv);
    std::istringstream back(csv.str());
    out.sidecar = sweep_sidecar(grid, result);
    for (const auto& r : result.rows) {
        if (r.flags.find("degenerate") != std::string::npos) out.degenerate = true;
    }
    nlohmann::json summary = out.sidecar;
    if (auto best = best_row(result.rows)) {
        summary["best"] = nlohmann::json::parse(nlohmann::json{{"ejs2_ghz", best->ejs2}, {"ec_ghz", best->ec},
                                                               {"dphi", best->dphi}, {"t2_s", best->t2}}.dump());
    }
    summary["boundary_fraction"] = boundary_fraction(result.rows, grid.dphi_axis);
    out.document = summary;
    // Sweep rows carry string columns, so they bypass the numeric table.
    out.document["csv"] = csv.str();
    out.plot_tag = "fig9";
    out.plot_table = fig9_dataset(result);
    return out;
}

Output do_optimize(const RunConfig& c)
{
    const auto& o = c.options;
    OptimizeBounds b;
    b.ejs2_lo = opt_number(o, "ejs2_lo", b.ejs2_lo);
    b.ejs2_hi = opt_number(o, "ejs2_hi", b.ejs2_hi);
    b.ec_lo = opt_number(o, "ec_lo", b.ec_lo);
    b.ec_hi = opt_number(o, "ec_hi", b.ec_hi);
    b.dphi_lo = opt_number(o, "dphi_lo", b.dphi_lo);
    b.dphi_hi = opt_number(o, "dphi_hi", b.dphi_hi);
    SweepFixed fixed;
    fixed.ratio = opt_number(o, "ratio", c.params.ratio());
    fixed.d = opt_number(o, "d", c.params.d1);
    fixed.ng = opt_number(o, "ng", c.params.ng);
    fixed.noise = c.noise;
    fixed.coherence.thermal = opt_bool(o, "thermal", true);
    OptimizeOptions oo;
    oo.coarse_ejs2 = opt_int(o, "n_ejs2", 21);
    oo.coarse_ec = opt_int(o, "n_ec", 21);
    oo.coarse_dphi = opt_int(o, "n_dphi", 11);
    oo.workers = static_cast<unsigned>(opt_int(o, "workers", 0));
    if (o.contains("target_f01")) oo.target_f01 = opt_number(o, "target_f01", 0.5);
    const auto r = optimize_t2(b, fixed, oo);
    Output out;
    out.degenerate = r.report.degenerate;
    out.document = {{"params", r.params},
                    {"ejs2_over_ec", r.params.ejs2 / r.params.ec},
                    {"report", r.report},
                    {"coarse_best_t2_s", r.coarse_best_t2},
                    {"evaluations", r.evaluations}};
    return out;
}

Output do_figures(const RunConfig& c)
{
    const auto& o = c.options;
    const std::string tag = opt_string(o, "figure", "fig4");
    Output out;
    out.plot_tag = tag;
    if (tag == "fig4") {
        out.table = fig4_dataset(opt_int(o, "points", 101));
    } else if (tag == "fig5") {
        out.table = fig5_dataset(opt_int(o, "points", 41));
    } else if (tag == "fig6") {
        out.table = fig6_dataset(opt_int(o, "points", 25), opt_int(o, "points", 25));
    } else if (tag == "fig7") {
        out.table = fig7_dataset(opt_int(o, "points", 81));
    } else if (tag == "fig8") {
        out.table = fig8_dataset(opt_number(o, "ejs2_over_ec", 20.0), opt_int(o, "points", 41));
    } else if (tag == "fig9") {
        const std::string src = opt_string(o, "sweep_csv", "");
        SweepResult result;
        if (src.empty()) {
            RunConfig sc = c;
            sc.subcommand = Subcommand::sweep;
            const auto grid = sweep_grid(sc);
            SweepOptions so;
            so.workers = static_cast<unsigned>(opt_int(o, "workers", 0));
            result = run_sweep(grid, so);
        } else {
            std::ifstream in(src);
            if (!in) throw InvalidArgument("cannot open sweep CSV '" + src + "'");
            result.rows = read_sweep_csv(in);
            result.chunks_total = result.chunks_done = 1;
        }
        out.table = fig9_dataset(result);
    } else {
        throw SchemaError("figures option 'figure' must be one of fig4..fig9");
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::trunc | std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
}

} // namespace

std::string to_string(Subcommand s)
{
    for (const auto& [name, value] : subcommand_names()) {
        if (value == s) return name;
    }
    return "coherence";
}

Subcommand parse_subcommand(const std::string& name)
{
    const auto it = subcommand_names().find(name);
    if (it == subcommand_names().end()) throw SchemaError("unknown subcommand '" + name + "'");
    return it->second;
}

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& name)
{
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw SchemaError("output format must be csv or json, got '" + name + "'");
}

OutputFormat RunConfig::resolved_format() const
{
    if (format) return *format;
    switch (subcommand) {
    case Subcommand::sweep:
    case Subcommand::figures:
    case Subcommand::spectrum:
    case Subcommand::semiclassics:
        return OutputFormat::csv;
    case Subcommand::elements:
    case Subcommand::coherence:
        return options.value("sweep", std::string("none")) == "none" ? OutputFormat::json : OutputFormat::csv;
    default:
        return OutputFormat::json;
    }
}

void RunConfig::validate() const
{
    params.validate_physics();
    if (params.n_trunc != 0 && params.n_trunc < 2) throw InvalidArgument("circuit field 'n_trunc' must be >= 2 or omitted");
    noise.validate();
    if (!options.is_object()) throw SchemaError("'options' must be a JSON object");
    if (plot && output_path.empty()) throw InvalidArgument("plot scripts need an output path to reference");
}

void to_json(nlohmann::json& j, const RunConfig& c)
{
    j = nlohmann::json{{"subcommand", to_string(c.subcommand)},
                       {"params", c.params},
                       {"noise", c.noise},
                       {"output", {{"path", c.output_path},
                                   {"format", c.format ? nlohmann::json(to_string(*c.format)) : nlohmann::json(nullptr)}}},
                       {"plot", c.plot},
                       {"allow_degenerate", c.allow_degenerate},
                       {"options", c.options}};
}

void from_json(const nlohmann::json& j, RunConfig& c)
{
    if (!j.is_object()) throw SchemaError("run config must be a JSON object");
    static const std::set<std::string> known{"subcommand", "params", "noise", "output", "plot", "allow_degenerate", "options"};
    for (const auto& item : j.items()) {
        if (!known.contains(item.key())) throw SchemaError("unknown run config field '" + item.key() + "'");
    }
    RunConfig out;
    if (j.contains("subcommand")) out.subcommand = parse_subcommand(j.at("subcommand").get<std::string>());
    if (j.contains("params")) out.params = j.at("params").get<CircuitParams>();
    if (j.contains("noise")) out.noise = j.at("noise").get<NoiseSpec>();
    if (j.contains("output")) {
        const auto& o = j.at("output");
        out.output_path = o.value("path", std::string());
        if (o.contains("format") && !o.at("format").is_null()) out.format = parse_format(o.at("format").get<std::string>());
    }
    out.plot = j.value("plot", false);
    out.allow_degenerate = j.value("allow_degenerate", false);
    if (j.contains("options")) out.options = j.at("options");
    c = std::move(out);
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    Output result;
    try {
        config.validate();
        switch (config.subcommand) {
        case Subcommand::spectrum: result = do_spectrum(config); break;
        case Subcommand::elements: result = do_elements(config); break;
        case Subcommand::coherence: result = do_coherence(config); break;
        case Subcommand::thermal: result = do_thermal(config); break;
        case Subcommand::semiclassics: result = do_semiclassics(config); break;
        case Subcommand::cpr: result = do_cpr(config); break;
        case Subcommand::sweep: result = do_sweep(config); break;
        case Subcommand::optimize: result = do_optimize(config); break;
        case Subcommand::figures: result = do_figures(config); break;
        }
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::failure;
    }

    try {
        const auto format = config.resolved_format();
        std::string text;
        if (config.subcommand == Subcommand::sweep && format == OutputFormat::csv) {
            text = result.document.at("csv").get<std::string>();
        } else if (format == OutputFormat::csv) {
            if (!result.table) throw SchemaError("this subcommand has no CSV form; use --format json");
            std::ostringstream s;
            write_csv(*result.table, s);
            text = s.str();
        } else {
            auto doc = result.document;
            if (doc.is_object()) doc.erase("csv");
            if (doc.is_null() && result.table) {
                doc = nlohmann::json::object();
                doc["columns"] = result.table->columns;
                doc["rows"] = result.table->rows;
            }
            text = doc.dump(2) + "\n";
        }
        if (config.output_path.empty()) {
            out << text;
        } else {
            const std::filesystem::path path(config.output_path);
            write_text(path, text);
            if (!result.sidecar.is_null()) {
                auto side = path;
                side.replace_extension(".json");
                if (side != path) write_text(side, result.sidecar.dump(2) + "\n");
            }
            if (config.plot) {
                if (!result.plot_tag) throw SchemaError("no plot schema for subcommand " + to_string(config.subcommand));
                auto csv = path;
                const Table& data = result.plot_table ? *result.plot_table : *result.table;
                if (result.plot_table) {
                    csv.replace_extension("." + *result.plot_tag + ".csv");
                    std::ostringstream s;
                    write_csv(data, s);
                    write_text(csv, s.str());
                }
                auto script = path;
                script.replace_extension(".py");
                write_text(script, emit_plot_script(data, *result.plot_tag, csv.filename().string()));
            }
        }
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::failure;
    }

    if (result.degenerate && !config.allow_degenerate) {
        err << "error: degenerate qubit levels encountered; rerun with --allow-degenerate to accept\n";
        return exit_code::degenerate;
    }
    return exit_code::ok;
}

} // namespace cos2phi
