#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cos2phi/circuit.hpp"
#include "cos2phi/noise.hpp"

namespace cos2phi {

// lo * (hi / lo)^(k / (n - 1)), k = 0..n-1, with both ends exact.
std::vector<double> log_axis(double lo, double hi, int n);

// Quantities held constant across a sweep.
struct SweepFixed {
    double ratio = -0.1;
    double d = 0.01;
    double ng = 0.25;
    NoiseSpec noise{};
    CoherenceOptions coherence{true, 4, false};

    [[nodiscard]] CircuitParams params(double ejs2, double ec, double dphi) const
    {
        return CircuitParams::from_ratio(ec, ejs2, ratio, d, dphi, ng);
    }
};

struct SweepGrid {
    std::vector<double> ejs2_axis;
    std::vector<double> ec_axis;
    std::vector<double> dphi_axis;
    SweepFixed fixed{};
    // Permit axes below ec = 1 MHz or dphi = 1e-5.
    bool allow_outside_envelope = false;

    // ejs2 in [5e-3, 50] GHz, ec in [1e-3, 20] GHz, dphi in [1e-5, 9e-3].
    static SweepGrid with_resolution(double ratio, int n_ejs2, int n_ec, int n_dphi);
    static SweepGrid reduced(double ratio) { return with_resolution(ratio, 21, 21, 11); }
    static SweepGrid full(double ratio) { return with_resolution(ratio, 401, 401, 101); }

    void validate() const;
    [[nodiscard]] std::size_t cell_count() const { return ejs2_axis.size() * ec_axis.size(); }
};

void to_json(nlohmann::json& j, const SweepGrid& g);
void from_json(const nlohmann::json& j, SweepGrid& g);

// Git-style SHA-1 of the canonical JSON form of the grid.
std::string config_hash(const SweepGrid& g);

// Best point over the flux axis of one (ejs2, ec) cell.
struct SweepRow {
    double ejs2 = 0.0;
    double ec = 0.0;
    double dphi = 0.0;
    double f01 = 0.0;
    double t1 = 0.0;
    double tphi = 0.0;
    double t2 = 0.0;
    double tphi_charge = 0.0;
    double tphi_flux = 0.0;
    LimitingSet limits;
    // "ok", or '|'-joined markers such as "degenerate" and "failed=3".
    std::string flags = "ok";

    [[nodiscard]] bool usable() const { return flags.find("error") == std::string::npos; }
    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepResult {
    // Ordered by cell index (ejs2 major, ec minor).
    std::vector<SweepRow> rows;
    std::string config_hash;
    std::size_t chunk_size = 0;
    std::size_t chunks_total = 0;
    std::size_t chunks_done = 0;
    std::size_t chunks_resumed = 0;

    [[nodiscard]] bool complete() const { return chunks_done == chunks_total; }
};

struct SweepOptions {
    // 0: read COS2PHI_WORKERS, else use the hardware concurrency.
    unsigned workers = 0;
    std::size_t chunk_size = 21;
    // Empty disables checkpointing.
    std::filesystem::path checkpoint_dir;
    // Stop after computing this many new chunks (for interrupted runs).
    std::optional<std::size_t> max_new_chunks;
};

unsigned resolve_workers(unsigned requested);

SweepRow evaluate_cell(const SweepGrid& grid, std::size_t ejs2_index, std::size_t ec_index);

SweepResult run_sweep(const SweepGrid& grid, const SweepOptions& options = {});

inline constexpr const char* kSweepHeader =
    "ejs2_ghz,ec_ghz,dphi,f01_ghz,t1_s,tphi_s,t2_s,tphi_charge_s,tphi_flux_s,limiting,flags";

std::string format_row(const SweepRow& row);
SweepRow parse_row(const std::string& line);

void write_sweep_csv(const SweepResult& result, std::ostream& out);
std::vector<SweepRow> read_sweep_csv(std::istream& in);
nlohmann::json sweep_sidecar(const SweepGrid& grid, const SweepResult& result);

// Row with the largest T2 among usable rows not limited by temperature; ties go
// to the smallest dphi, then the smallest ejs2.
std::optional<SweepRow> best_row(const std::vector<SweepRow>& rows);

// Fraction of usable rows whose optimal dphi is the first or last axis value.
double boundary_fraction(const std::vector<SweepRow>& rows, const std::vector<double>& dphi_axis);

struct OptimizeBounds {
    double ejs2_lo = 5e-3;
    double ejs2_hi = 50.0;
    double ec_lo = 1e-3;
    double ec_hi = 20.0;
    double dphi_lo = 1e-5;
    double dphi_hi = 9e-3;
};

struct OptimizeOptions {
    int coarse_ejs2 = 21;
    int coarse_ec = 21;
    int coarse_dphi = 11;
    // When set, ec is solved for this qubit frequency (GHz) and the search
    // runs over ejs2/ec and dphi.
    std::optional<double> target_f01;
    double min_step_decades = 1e-3;
    unsigned workers = 0;
};

struct OptimizeResult {
    CircuitParams params;
    CoherenceReport report;
    double coarse_best_t2 = 0.0;
    std::size_t evaluations = 0;
    SweepResult coarse;
};

OptimizeResult optimize_t2(const OptimizeBounds& bounds, const SweepFixed& fixed, const OptimizeOptions& options = {});

} // namespace cos2phi
