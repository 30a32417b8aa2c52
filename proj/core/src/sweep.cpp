#include "cos2phi/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "cos2phi/error.hpp"
#include "cos2phi/spectrum.hpp"

namespace cos2phi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_axis(const std::vector<double>& axis, const char* name)
{
    if (axis.empty()) throw InvalidArgument(std::string("sweep axis '") + name + "' is empty");
    for (std::size_t k = 0; k < axis.size(); ++k) {
        if (!(axis[k] > 0.0) || !std::isfinite(axis[k])) {
            throw InvalidArgument(std::string("sweep axis '") + name + "' must hold positive finite values");
        }
        if (k > 0 && !(axis[k] > axis[k - 1])) {
            throw InvalidArgument(std::string("sweep axis '") + name + "' must be strictly increasing");
        }
    }
}

std::string number(double v)
{
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

std::string sha1_hex(const std::string& data)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha1(), nullptr) != 1) {
        throw Error("SHA-1 digest failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        std::array<char, 3> b{};
        std::snprintf(b.data(), b.size(), "%02x", md[i]);
        hex += b.data();
    }
    return hex;
}

SweepRow failed_row(double ejs2, double ec, const std::string& why)
{
    SweepRow r;
    r.ejs2 = ejs2;
    r.ec = ec;
    r.dphi = r.f01 = r.t1 = r.tphi = r.t2 = r.tphi_charge = r.tphi_flux = kNaN;
    r.limits.temperature = 2.0 * ejs2 < constants::thermal_floor_ghz * (1.0 - 1e-9);
    r.flags = "error:" + why;
    return r;
}

SweepRow row_from(const CircuitParams& p, const CoherenceReport& rep)
{
    SweepRow r;
    r.ejs2 = p.ejs2;
    r.ec = p.ec;
    r.dphi = p.dphi;
    r.f01 = rep.f01;
    r.t1 = rep.t1_effective;
    r.tphi = rep.tphi_total;
    r.t2 = rep.t2;
    r.tphi_charge = rep.tphi_charge;
    r.tphi_flux = rep.tphi_flux;
    r.limits = rep.limits;
    r.flags = rep.degenerate ? "degenerate" : "ok";
    return r;
}

std::filesystem::path chunk_path(const std::filesystem::path& dir, const std::string& hash, std::size_t k)
{
    return dir / (hash + ".part" + std::to_string(k) + ".csv");
}

std::optional<std::vector<SweepRow>> load_chunk(const std::filesystem::path& path, std::size_t expected)
{
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        auto rows = read_sweep_csv(in);
        if (rows.size() != expected) return std::nullopt;
        return rows;
    } catch (const Error&) {
        return std::nullopt;
    }
}

void write_chunk(const std::filesystem::path& path, const std::vector<SweepRow>& rows)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot write checkpoint " + tmp.string());
        out << kSweepHeader << '\n';
        for (const auto& r : rows) out << format_row(r) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

bool better(const SweepRow& a, const SweepRow& b)
{
    if (a.t2 != b.t2) return a.t2 > b.t2;
    if (a.dphi != b.dphi) return a.dphi < b.dphi;
    return a.ejs2 < b.ejs2;
}

bool temperature_ok(double ejs2) { return 2.0 * ejs2 >= constants::thermal_floor_ghz * (1.0 - 1e-9); }

} // namespace

std::vector<double> log_axis(double lo, double hi, int n)
{
    if (!(lo > 0.0) || !(hi > lo) || n < 2) {
        if (n == 1 && lo > 0.0) return {lo};
        throw InvalidArgument("log axis needs 0 < lo < hi and n >= 2");
    }
    std::vector<double> axis(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        axis[static_cast<std::size_t>(k)] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
    }
    axis.front() = lo;
    axis.back() = hi;
    return axis;
}

SweepGrid SweepGrid::with_resolution(double ratio, int n_ejs2, int n_ec, int n_dphi)
{
    SweepGrid g;
    g.ejs2_axis = log_axis(5e-3, 50.0, n_ejs2);
    g.ec_axis = log_axis(1e-3, 20.0, n_ec);
    g.dphi_axis = log_axis(1e-5, 9e-3, n_dphi);
    g.fixed.ratio = ratio;
    return g;
}

void SweepGrid::validate() const
{
    require_axis(ejs2_axis, "ejs2");
    require_axis(ec_axis, "ec");
    require_axis(dphi_axis, "dphi");
    fixed.noise.validate();
    if (fixed.ratio == 0.0 || !std::isfinite(fixed.ratio)) throw InvalidArgument("sweep ratio must be nonzero");
    if (!(std::abs(fixed.d) < 1.0)) throw InvalidArgument("sweep asymmetry must satisfy |d| < 1");
    if (!allow_outside_envelope) {
        if (ec_axis.front() < 1e-3 * (1.0 - 1e-12)) {
            throw InvalidArgument("ec axis starts below 1 MHz; pass allow_outside_envelope to override");
        }
        if (dphi_axis.front() < 1e-5 * (1.0 - 1e-12)) {
            throw InvalidArgument("dphi axis starts below 1e-5; pass allow_outside_envelope to override");
        }
    }
}

void to_json(nlohmann::json& j, const SweepGrid& g)
{
    j = nlohmann::json{{"ejs2_axis", g.ejs2_axis},
                       {"ec_axis", g.ec_axis},
                       {"dphi_axis", g.dphi_axis},
                       {"ratio", g.fixed.ratio},
                       {"d", g.fixed.d},
                       {"ng", g.fixed.ng},
                       {"noise", g.fixed.noise},
                       {"thermal", g.fixed.coherence.thermal},
                       {"n_levels", g.fixed.coherence.n_levels},
                       {"thermal_dephasing", g.fixed.coherence.thermal_dephasing},
                       {"allow_outside_envelope", g.allow_outside_envelope}};
}

void from_json(const nlohmann::json& j, SweepGrid& g)
{
    SweepGrid out;
    try {
        out.ejs2_axis = j.at("ejs2_axis").get<std::vector<double>>();
        out.ec_axis = j.at("ec_axis").get<std::vector<double>>();
        out.dphi_axis = j.at("dphi_axis").get<std::vector<double>>();
        out.fixed.ratio = j.at("ratio").get<double>();
        out.fixed.d = j.at("d").get<double>();
        out.fixed.ng = j.at("ng").get<double>();
        out.fixed.noise = j.at("noise").get<NoiseSpec>();
        out.fixed.coherence.thermal = j.value("thermal", true);
        out.fixed.coherence.n_levels = j.value("n_levels", 4);
        out.fixed.coherence.thermal_dephasing = j.value("thermal_dephasing", false);
        out.allow_outside_envelope = j.value("allow_outside_envelope", false);
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("invalid sweep grid: ") + e.what());
    }
    out.validate();
    g = std::move(out);
}

std::string config_hash(const SweepGrid& g)
{
    const std::string body = nlohmann::json(g).dump();
    std::string blob = "blob " + std::to_string(body.size());
    blob.push_back('\0');
    blob += body;
    return sha1_hex(blob);
}

unsigned resolve_workers(unsigned requested)
{
    if (requested > 0) return requested;
    if (const char* env = std::getenv("COS2PHI_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

SweepRow evaluate_cell(const SweepGrid& grid, std::size_t ejs2_index, std::size_t ec_index)
{
    const double ejs2 = grid.ejs2_axis.at(ejs2_index);
    const double ec = grid.ec_axis.at(ec_index);
    int n_trunc = 0;
    try {
        n_trunc = converge_truncation(grid.fixed.params(ejs2, ec, grid.dphi_axis.front()));
    } catch (const Error&) {
        return failed_row(ejs2, ec, "truncation");
    }
    std::optional<SweepRow> best;
    int failures = 0;
    for (double dphi : grid.dphi_axis) {
        auto p = grid.fixed.params(ejs2, ec, dphi);
        p.n_trunc = n_trunc;
        try {
            const auto rep = coherence_report(p, grid.fixed.noise, grid.fixed.coherence);
            if (!best || rep.t2 > best->t2) best = row_from(p, rep);
        } catch (const Error&) {
            ++failures;
        }
    }
    if (!best) return failed_row(ejs2, ec, "all_points");
    if (failures > 0) {
        best->flags = (best->flags == "ok" ? std::string() : best->flags + "|") + "failed=" + std::to_string(failures);
    }
    return *best;
}

SweepResult run_sweep(const SweepGrid& grid, const SweepOptions& options)
{
    grid.validate();
    if (options.chunk_size == 0) throw InvalidArgument("chunk size must be positive");
    SweepResult result;
    result.config_hash = config_hash(grid);
    result.chunk_size = options.chunk_size;
    const std::size_t cells = grid.cell_count();
    result.chunks_total = (cells + options.chunk_size - 1) / options.chunk_size;
    SweepRow placeholder;
    placeholder.flags.clear();
    result.rows.assign(cells, placeholder);

    const bool checkpointing = !options.checkpoint_dir.empty();
    if (checkpointing) std::filesystem::create_directories(options.checkpoint_dir);

    auto chunk_range = [&](std::size_t k) {
        const std::size_t begin = k * options.chunk_size;
        return std::pair{begin, std::min(cells, begin + options.chunk_size)};
    };

    std::vector<std::size_t> pending;
    for (std::size_t k = 0; k < result.chunks_total; ++k) {
        if (checkpointing) {
            const auto [begin, end] = chunk_range(k);
            if (auto rows = load_chunk(chunk_path(options.checkpoint_dir, result.config_hash, k), end - begin)) {
                std::move(rows->begin(), rows->end(), result.rows.begin() + static_cast<std::ptrdiff_t>(begin));
                ++result.chunks_done;
                ++result.chunks_resumed;
                continue;
            }
        }
        pending.push_back(k);
    }
    if (options.max_new_chunks && pending.size() > *options.max_new_chunks) {
        pending.resize(*options.max_new_chunks);
    }

    std::atomic<std::size_t> next{0};
    std::mutex writer;
    std::exception_ptr failure;
    const std::size_t n_ec = grid.ec_axis.size();
    auto work = [&] {
        for (;;) {
            const std::size_t slot = next.fetch_add(1);
            if (slot >= pending.size()) return;
            const std::size_t k = pending[slot];
            const auto [begin, end] = chunk_range(k);
            std::vector<SweepRow> rows;
            rows.reserve(end - begin);
            for (std::size_t cell = begin; cell < end; ++cell) {
                rows.push_back(evaluate_cell(grid, cell / n_ec, cell % n_ec));
            }
            std::lock_guard lock(writer);
            try {
                if (checkpointing) write_chunk(chunk_path(options.checkpoint_dir, result.config_hash, k), rows);
            } catch (...) {
                if (!failure) failure = std::current_exception();
            }
            std::move(rows.begin(), rows.end(), result.rows.begin() + static_cast<std::ptrdiff_t>(begin));
            ++result.chunks_done;
        }
    };

    const unsigned workers = std::min<std::size_t>(resolve_workers(options.workers), std::max<std::size_t>(1, pending.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return result;
}

std::string format_row(const SweepRow& r)
{
    std::string line;
    for (double v : {r.ejs2, r.ec, r.dphi, r.f01, r.t1, r.tphi, r.t2, r.tphi_charge, r.tphi_flux}) {
        line += number(v);
        line += ',';
    }
    line += r.limits.tag();
    line += ',';
    line += r.flags;
    return line;
}

SweepRow parse_row(const std::string& line)
{
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (fields.size() != 11) throw SchemaError("sweep row must have 11 fields: " + line);
    auto num = [&fields](std::size_t i) {
        char* end = nullptr;
        const double v = std::strtod(fields[i].c_str(), &end);
        if (end == fields[i].c_str()) throw SchemaError("bad number '" + fields[i] + "' in sweep row");
        return v;
    };
    SweepRow r;
    r.ejs2 = num(0);
    r.ec = num(1);
    r.dphi = num(2);
    r.f01 = num(3);
    r.t1 = num(4);
    r.tphi = num(5);
    r.t2 = num(6);
    r.tphi_charge = num(7);
    r.tphi_flux = num(8);
    r.limits = LimitingSet::parse(fields[9]);
    r.flags = fields[10];
    return r;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out)
{
    out << kSweepHeader << '\n';
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        if (result.complete() || !result.rows[i].flags.empty()) out << format_row(result.rows[i]) << '\n';
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != kSweepHeader) throw SchemaError("missing sweep CSV header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (!line.empty()) rows.push_back(parse_row(line));
    }
    return rows;
}

nlohmann::json sweep_sidecar(const SweepGrid& grid, const SweepResult& result)
{
    return nlohmann::json{{"config_hash", result.config_hash},
                          {"config", grid},
                          {"chunk_size", result.chunk_size},
                          {"chunks_total", result.chunks_total},
                          {"chunks_done", result.chunks_done},
                          {"columns", kSweepHeader}};
}

std::optional<SweepRow> best_row(const std::vector<SweepRow>& rows)
{
    std::optional<SweepRow> best;
    for (const auto& r : rows) {
        if (!r.usable() || r.limits.temperature || !std::isfinite(r.t2)) continue;
        if (!best || better(r, *best)) best = r;
    }
    return best;
}

double boundary_fraction(const std::vector<SweepRow>& rows, const std::vector<double>& dphi_axis)
{
    std::size_t total = 0;
    std::size_t edge = 0;
    for (const auto& r : rows) {
        if (!r.usable()) continue;
        ++total;
        if (r.dphi == dphi_axis.front() || r.dphi == dphi_axis.back()) ++edge;
    }
    return total == 0 ? 0.0 : static_cast<double>(edge) / static_cast<double>(total);
}

namespace {

struct Candidate {
    CircuitParams params;
    CoherenceReport report;
};

bool in_bounds(const CircuitParams& p, const OptimizeBounds& b)
{
    const double tol = 1e-12;
    return p.ejs2 >= b.ejs2_lo * (1 - tol) && p.ejs2 <= b.ejs2_hi * (1 + tol) && p.ec >= b.ec_lo * (1 - tol)
           && p.ec <= b.ec_hi * (1 + tol) && p.dphi >= b.dphi_lo * (1 - tol) && p.dphi <= b.dphi_hi * (1 + tol);
}

// Evaluates the objective at a point given in log10 coordinates; nullopt when
// infeasible or failed.
class Objective {
public:
    Objective(const OptimizeBounds& b, const SweepFixed& f, const OptimizeOptions& o) : bounds_(b), fixed_(f), options_(o) {}

    std::optional<Candidate> operator()(const std::array<double, 3>& x)
    {
        ++evaluations;
        try {
            CircuitParams p;
            if (options_.target_f01) {
                const double r = std::pow(10.0, x[0]);
                const double dphi = std::pow(10.0, x[2]);
                auto unit = fixed_.params(r, 1.0, dphi);
                unit.n_trunc = converge_truncation(unit);
                const double g = transition_frequency(solve(unit, 2), 0, 1);
                if (!(g > 0.0)) return std::nullopt;
                const double ec = *options_.target_f01 / g;
                p = fixed_.params(r * ec, ec, dphi);
                p.n_trunc = unit.n_trunc;
            } else {
                p = fixed_.params(std::pow(10.0, x[0]), std::pow(10.0, x[1]), std::pow(10.0, x[2]));
                p.n_trunc = converge_truncation(p);
            }
            if (!in_bounds(p, bounds_) || !temperature_ok(p.ejs2)) return std::nullopt;
            auto rep = coherence_report(p, fixed_.noise, fixed_.coherence);
            if (rep.degenerate) return std::nullopt;
            return Candidate{p, rep};
        } catch (const Error&) {
            return std::nullopt;
        }
    }

    std::size_t evaluations = 0;

private:
    OptimizeBounds bounds_;
    SweepFixed fixed_;
    OptimizeOptions options_;
};

} // namespace

OptimizeResult optimize_t2(const OptimizeBounds& bounds, const SweepFixed& fixed, const OptimizeOptions& options)
{
    if (!(bounds.ejs2_lo > 0 && bounds.ejs2_hi > bounds.ejs2_lo && bounds.ec_lo > 0 && bounds.ec_hi > bounds.ec_lo
          && bounds.dphi_lo > 0 && bounds.dphi_hi > bounds.dphi_lo)) {
        throw InvalidArgument("optimizer bounds must be positive and ordered");
    }
    if (bounds.ec_lo < 1e-3 * (1 - 1e-12) || bounds.dphi_lo < 1e-5 * (1 - 1e-12)) {
        throw InvalidArgument("optimizer bounds fall outside the realistic envelope (ec >= 1 MHz, dphi >= 1e-5)");
    }
    if (2.0 * bounds.ejs2_hi < constants::thermal_floor_ghz) {
        throw InvalidArgument("no feasible point: every ejs2 in the bounds is limited by temperature");
    }

    Objective objective(bounds, fixed, options);
    OptimizeResult out;
    std::optional<Candidate> best;
    std::array<double, 3> x{};
    std::array<double, 3> step{};
    std::array<bool, 3> active{true, true, true};

    if (options.target_f01) {
        if (!(*options.target_f01 > 0.0)) throw InvalidArgument("target frequency must be positive");
        const auto r_axis = log_axis(bounds.ejs2_lo / bounds.ec_hi, bounds.ejs2_hi / bounds.ec_lo, options.coarse_ejs2);
        const auto d_axis = log_axis(bounds.dphi_lo, bounds.dphi_hi, options.coarse_dphi);
        for (double r : r_axis) {
            for (double dphi : d_axis) {
                const std::array<double, 3> at{std::log10(r), 0.0, std::log10(dphi)};
                auto c = objective(at);
                if (c && (!best || c->report.t2 > best->report.t2)) {
                    best = c;
                    x = at;
                }
            }
        }
        step = {std::log10(r_axis[1] / r_axis[0]), 0.0, std::log10(d_axis[1] / d_axis[0])};
        active[1] = false;
    } else {
        auto grid = SweepGrid::with_resolution(fixed.ratio, options.coarse_ejs2, options.coarse_ec, options.coarse_dphi);
        grid.ejs2_axis = log_axis(bounds.ejs2_lo, bounds.ejs2_hi, options.coarse_ejs2);
        grid.ec_axis = log_axis(bounds.ec_lo, bounds.ec_hi, options.coarse_ec);
        grid.dphi_axis = log_axis(bounds.dphi_lo, bounds.dphi_hi, options.coarse_dphi);
        grid.fixed = fixed;
        SweepOptions so;
        so.workers = options.workers;
        out.coarse = run_sweep(grid, so);
        if (auto row = best_row(out.coarse.rows)) {
            x = {std::log10(row->ejs2), std::log10(row->ec), std::log10(row->dphi)};
            best = objective(x);
        }
        step = {std::log10(grid.ejs2_axis[1] / grid.ejs2_axis[0]), std::log10(grid.ec_axis[1] / grid.ec_axis[0]),
                std::log10(grid.dphi_axis[1] / grid.dphi_axis[0])};
    }
    if (!best) throw Error("no feasible point: every candidate is temperature limited or failed");
    out.coarse_best_t2 = best->report.t2;

    // Compass search in log space with step halving.
    double scale = 1.0;
    while (scale * std::max({step[0], step[1], step[2]}) > options.min_step_decades) {
        bool moved = false;
        for (int axis = 0; axis < 3 && !moved; ++axis) {
            if (!active[static_cast<std::size_t>(axis)]) continue;
            for (double sign : {-1.0, 1.0}) {
                auto trial = x;
                trial[static_cast<std::size_t>(axis)] += sign * scale * step[static_cast<std::size_t>(axis)];
                auto c = objective(trial);
                if (c && c->report.t2 > best->report.t2) {
                    best = c;
                    x = trial;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) scale *= 0.5;
    }
    out.params = best->params;
    out.report = best->report;
    out.evaluations = objective.evaluations;
    return out;
}

} // namespace cos2phi
