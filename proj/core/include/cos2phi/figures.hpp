#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cos2phi/sweep.hpp"

namespace cos2phi {

// Numeric table with named columns.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
    [[nodiscard]] std::size_t column(const std::string& name) const;
};

void write_csv(const Table& t, std::ostream& out);
Table read_csv(std::istream& in);

// Three lowest levels vs ng; rows ejs2/ec in {1, 20, 150}, columns pure
// (dphi = 0, d = 0) and interference (dphi = 1e-3, d = 1%). Energies are in
// units of the pure f01 at ng = 0 and measured from the bottom of level 0.
Table fig4_dataset(int ng_points = 101);

// f01 and relaxation merits vs asymmetry for ejs2/ec in {1, 50, 150}.
Table fig5_dataset(int d_points = 41);

// f01 and relaxation merits over (dphi, ejs2/ec).
Table fig6_dataset(int dphi_points = 25, int ratio_points = 25);

// Numerical and two-level f01 vs dphi at ejs2/ec = 40.
Table fig7_dataset(int dphi_points = 81);

// Coherence times vs dphi at ec = 0.5 GHz.
Table fig8_dataset(double ejs2_over_ec, int dphi_points = 41);

// T2 map with limiting-mechanism masks from a finished sweep.
Table fig9_dataset(const SweepResult& result);

std::vector<std::string> required_columns(const std::string& figure_tag);

// Plotting script that reads `csv_path`; throws SchemaError listing missing
// columns.
std::string emit_plot_script(const Table& dataset, const std::string& figure_tag, const std::string& csv_path);

} // namespace cos2phi
