#include "cos2phi/figures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "cos2phi/elements.hpp"
#include "cos2phi/error.hpp"
#include "cos2phi/semiclassics.hpp"
#include "cos2phi/spectrum.hpp"

namespace cos2phi {

namespace {

constexpr double kRatio = -0.1;

std::string number(double v)
{
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

CircuitParams converged(CircuitParams p)
{
    p.n_trunc = 0;
    return with_converged_truncation(p);
}

std::string join_columns(const std::vector<std::string>& cols)
{
    std::string out;
    for (const auto& c : cols) out += (out.empty() ? "" : ", ") + c;
    return out;
}

const std::map<std::string, std::vector<std::string>>& schemas()
{
    static const std::map<std::string, std::vector<std::string>> s{
        {"fig4", {"panel", "ejs2_over_ec", "dphi", "ng", "e0", "e1", "e2"}},
        {"fig5", {"ejs2_over_ec", "d", "f01_ghz", "m_n", "m_1phi", "m_2phi"}},
        {"fig6", {"ejs2_over_ec", "dphi", "f01_ghz", "m_n", "m_1phi", "m_2phi"}},
        {"fig7", {"ng", "dphi", "f01_ghz", "model_f01_ghz"}},
        {"fig8", {"dphi", "tphi_s", "tphi_flux_s", "tphi_charge_s", "t1_s", "t1_flux_s", "t1_dielectric_s"}},
        {"fig9", {"ejs2_ghz", "ec_ghz", "t2_s", "temperature", "charge", "flux"}},
    };
    return s;
}

const char* script_body(const std::string& tag)
{
    if (tag == "fig4") {
        return R"py(fig, axes = plt.subplots(3, 2, figsize=(8, 9), sharex=True)
for panel, ax in zip(range(6), axes.flat):
    sub = data[data["panel"] == panel]
    for level in ("e0", "e1", "e2"):
        ax.plot(sub["ng"], sub[level], label=level)
    ax.set_title(f"ejs2/ec = {sub['ejs2_over_ec'].iloc[0]:g}, dphi = {sub['dphi'].iloc[0]:g}")
    ax.set_xlabel("n_g")
    ax.set_ylabel("E_m / E_01")
axes[0, 0].legend()
)py";
    }
    if (tag == "fig5") {
        return R"py(fig, axes = plt.subplots(1, 4, figsize=(14, 3.5))
for ratio, sub in data.groupby("ejs2_over_ec"):
    for ax, col in zip(axes, ("f01_ghz", "m_n", "m_1phi", "m_2phi")):
        ax.loglog(sub["d"], sub[col], label=f"ejs2/ec = {ratio:g}")
        ax.set_xlabel("d")
        ax.set_ylabel(col)
axes[0].legend()
)py";
    }
    if (tag == "fig6") {
        return R"py(fig, axes = plt.subplots(1, 4, figsize=(16, 3.5))
x = sorted(data["dphi"].unique())
y = sorted(data["ejs2_over_ec"].unique())
for ax, col in zip(axes, ("f01_ghz", "m_n", "m_1phi", "m_2phi")):
    z = data.pivot(index="ejs2_over_ec", columns="dphi", values=col).values
    mesh = ax.pcolormesh(x, y, np.clip(z, 1e-4, None), norm=LogNorm(), shading="nearest")
    ax.set_xscale("log"); ax.set_yscale("log")
    ax.set_xlabel("dphi"); ax.set_ylabel("ejs2/ec"); ax.set_title(col)
    fig.colorbar(mesh, ax=ax)
)py";
    }
    if (tag == "fig7") {
        return R"py(fig, ax = plt.subplots(figsize=(5, 4))
for ng, sub in data.groupby("ng"):
    ax.plot(sub["dphi"], sub["f01_ghz"], label=f"numerics, n_g = {ng:g}")
    ax.plot(sub["dphi"], sub["model_f01_ghz"], "--", label=f"two-level model, n_g = {ng:g}")
ax.set_xlabel("dphi")
ax.set_ylabel("f01 (GHz)")
ax.legend()
)py";
    }
    if (tag == "fig8") {
        return R"py(fig, (left, right) = plt.subplots(1, 2, figsize=(10, 4))
for col in ("tphi_s", "tphi_flux_s", "tphi_charge_s"):
    left.loglog(data["dphi"], data[col], label=col)
for col in ("t1_s", "t1_flux_s", "t1_dielectric_s"):
    right.loglog(data["dphi"], data[col], label=col)
for ax in (left, right):
    ax.set_xlabel("dphi")
    ax.set_ylabel("time (s)")
    ax.legend()
)py";
    }
    return R"py(fig, ax = plt.subplots(figsize=(6, 5))
x = sorted(data["ec_ghz"].unique())
y = sorted(data["ejs2_ghz"].unique())
z = data.pivot(index="ejs2_ghz", columns="ec_ghz", values="t2_s").values
mesh = ax.pcolormesh(x, y, z, norm=LogNorm(), shading="nearest")
fig.colorbar(mesh, ax=ax, label="best T2 (s)")
for col, color in (("temperature", "black"), ("charge", "tab:blue"), ("flux", "salmon")):
    mask = data.pivot(index="ejs2_ghz", columns="ec_ghz", values=col).values
    ax.contourf(x, y, mask, levels=[0.5, 1.5], colors=[color], alpha=0.35)
ax.set_xscale("log"); ax.set_yscale("log")
ax.set_xlabel("E_C (GHz)"); ax.set_ylabel("E_JS2 (GHz)")
)py";
}

} // namespace

void Table::add(std::vector<double> row)
{
    if (row.size() != columns.size()) throw InvalidArgument("row width does not match the table columns");
    rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw SchemaError("no column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

void write_csv(const Table& t, std::ostream& out)
{
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << number(row[c]);
        out << '\n';
    }
}

Table read_csv(std::istream& in)
{
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("empty CSV");
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) t.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream fields(line);
        while (std::getline(fields, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        t.add(std::move(row));
    }
    return t;
}

Table fig4_dataset(int ng_points)
{
    if (ng_points < 2) throw InvalidArgument("fig4 needs at least two charge points");
    Table t{schemas().at("fig4"), {}};
    const std::array<double, 3> ratios{1.0, 20.0, 150.0};
    int panel = 0;
    for (double r : ratios) {
        const auto pure0 = converged(CircuitParams::from_ratio(1.0, r, kRatio, 0.0, 0.0, 0.0));
        const double unit = transition_frequency(solve(pure0, 2), 0, 1);
        for (const auto& [dphi, d] : {std::pair{0.0, 0.0}, std::pair{1e-3, 0.01}}) {
            auto p = CircuitParams::from_ratio(1.0, r, kRatio, d, dphi, 0.0, pure0.n_trunc);
            std::vector<std::array<double, 3>> levels;
            double bottom = std::numeric_limits<double>::infinity();
            for (int k = 0; k < ng_points; ++k) {
                p.ng = -1.0 + 2.0 * k / (ng_points - 1);
                const auto s = solve(p, 3);
                levels.push_back({s.energies[0], s.energies[1], s.energies[2]});
                bottom = std::min(bottom, s.energies[0]);
            }
            for (int k = 0; k < ng_points; ++k) {
                const auto& e = levels[static_cast<std::size_t>(k)];
                t.add({static_cast<double>(panel), r, dphi, -1.0 + 2.0 * k / (ng_points - 1), (e[0] - bottom) / unit,
                       (e[1] - bottom) / unit, (e[2] - bottom) / unit});
            }
            ++panel;
        }
    }
    return t;
}

Table fig5_dataset(int d_points)
{
    Table t{schemas().at("fig5"), {}};
    const auto ds = log_axis(1e-4, 0.3, d_points);
    for (double r : {1.0, 50.0, 150.0}) {
        const int n = converge_truncation(CircuitParams::from_ratio(1.0, r, kRatio, 0.01, 1e-5, 0.25));
        for (double d : ds) {
            const auto p = CircuitParams::from_ratio(1.0, r, kRatio, d, 1e-5, 0.25, n);
            const auto s = solve(p, 2);
            const auto m = matrix_elements(p, s);
            t.add({r, d, transition_frequency(s, 0, 1), m.m_n, m.m_1phi, m.m_2phi});
        }
    }
    return t;
}

Table fig6_dataset(int dphi_points, int ratio_points)
{
    Table t{schemas().at("fig6"), {}};
    const auto dphis = log_axis(1e-6, 1e-1, dphi_points);
    for (double r : log_axis(1.0, 200.0, ratio_points)) {
        const int n = converge_truncation(CircuitParams::from_ratio(1.0, r, kRatio, 0.01, 1e-6, 0.25));
        for (double dphi : dphis) {
            const auto p = CircuitParams::from_ratio(1.0, r, kRatio, 0.01, dphi, 0.25, n);
            const auto s = solve(p, 2);
            const auto m = matrix_elements(p, s);
            t.add({r, dphi, transition_frequency(s, 0, 1), m.m_n, m.m_1phi, m.m_2phi});
        }
    }
    return t;
}

Table fig7_dataset(int dphi_points)
{
    Table t{schemas().at("fig7"), {}};
    for (double ng : {0.0, 0.5}) {
        const auto base = converged(CircuitParams::from_ratio(0.5, 20.0, kRatio, 0.0, 0.0, ng));
        const auto model = two_level_model(base);
        const double span = 5.0 * sweetness(CircuitParams::from_ratio(0.5, 20.0, kRatio, 0.0, 0.0, 0.0));
        for (int k = 0; k < dphi_points; ++k) {
            auto p = base;
            p.dphi = -span + 2.0 * span * k / (dphi_points - 1);
            t.add({ng, p.dphi, transition_frequency(solve(p, 2), 0, 1), two_level_f01(model, p.dphi)});
        }
    }
    return t;
}

Table fig8_dataset(double ejs2_over_ec, int dphi_points)
{
    Table t{schemas().at("fig8"), {}};
    t.columns.push_back("t2_s");
    t.columns.push_back("f01_ghz");
    const double ec = 0.5;
    const int n = converge_truncation(CircuitParams::from_ratio(ec, ejs2_over_ec * ec, kRatio, 0.01, 1e-6, 0.25));
    const NoiseSpec noise;
    for (double dphi : log_axis(1e-6, 1e-2, dphi_points)) {
        const auto p = CircuitParams::from_ratio(ec, ejs2_over_ec * ec, kRatio, 0.01, dphi, 0.25, n);
        const auto r = coherence_report(p, noise);
        t.add({dphi, r.tphi_total, r.tphi_flux, r.tphi_charge, r.t1_total, r.t1_flux, r.t1_dielectric, r.t2, r.f01});
    }
    return t;
}

Table fig9_dataset(const SweepResult& result)
{
    Table t{schemas().at("fig9"), {}};
    t.columns.push_back("dphi");
    for (const auto& r : result.rows) {
        if (r.flags.empty()) continue;
        t.add({r.ejs2, r.ec, r.t2, r.limits.temperature ? 1.0 : 0.0, r.limits.charge ? 1.0 : 0.0,
               r.limits.flux ? 1.0 : 0.0, r.dphi});
    }
    return t;
}

std::vector<std::string> required_columns(const std::string& figure_tag)
{
    const auto it = schemas().find(figure_tag);
    if (it == schemas().end()) throw InvalidArgument("unknown figure '" + figure_tag + "'");
    return it->second;
}

std::string emit_plot_script(const Table& dataset, const std::string& figure_tag, const std::string& csv_path)
{
    std::vector<std::string> missing;
    for (const auto& c : required_columns(figure_tag)) {
        if (std::find(dataset.columns.begin(), dataset.columns.end(), c) == dataset.columns.end()) {
            missing.push_back(c);
        }
    }
    if (!missing.empty()) {
        throw SchemaError(figure_tag + " dataset is missing columns: " + join_columns(missing));
    }
    std::ostringstream s;
    s << "#!/usr/bin/env python3\n"
      << "import os\n"
      << "import numpy as np\n"
      << "import pandas as pd\n"
      << "import matplotlib.pyplot as plt\n"
      << "from matplotlib.colors import LogNorm\n\n"
      << "here = os.path.dirname(os.path.abspath(__file__))\n"
      << "data = pd.read_csv(os.path.join(here, \"" << csv_path << "\"))\n\n"
      << script_body(figure_tag) << "\n"
      << "fig.tight_layout()\n"
      << "fig.savefig(os.path.join(here, \"" << figure_tag << ".pdf\"))\n";
    return s.str();
}

} // namespace cos2phi
