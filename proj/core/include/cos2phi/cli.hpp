#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "cos2phi/circuit.hpp"
#include "cos2phi/noise.hpp"

namespace cos2phi {

enum class Subcommand { spectrum, elements, coherence, thermal, semiclassics, cpr, sweep, optimize, figures };
enum class OutputFormat { csv, json };

std::string to_string(Subcommand s);
Subcommand parse_subcommand(const std::string& name);
std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& name);

struct RunConfig {
    Subcommand subcommand = Subcommand::coherence;
    CircuitParams params = CircuitParams::from_ratio(0.5, 10.0, -0.1, 0.01, 1e-5, 0.25);
    NoiseSpec noise{};
    // Empty writes to the standard output.
    std::string output_path;
    std::optional<OutputFormat> format;
    bool plot = false;
    bool allow_degenerate = false;
    // Subcommand-specific settings (sweep ranges, model names, figure tag, ...).
    nlohmann::json options = nlohmann::json::object();

    // CSV for sweeps, tables and figures; JSON for single points.
    [[nodiscard]] OutputFormat resolved_format() const;
    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int usage = 2;
inline constexpr int degenerate = 3;
} // namespace exit_code

// Executes one subcommand. Data goes to config.output_path (or `out`),
// diagnostics to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace cos2phi
