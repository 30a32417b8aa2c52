#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace cos2phi {

// U(phi) = sum_m coefficients[m] cos(m phi).
struct HarmonicSeries {
    std::vector<double> coefficients;
    std::string model_tag;

    [[nodiscard]] int order() const { return static_cast<int>(coefficients.size()) - 1; }
    [[nodiscard]] double operator[](int m) const { return coefficients.at(static_cast<std::size_t>(m)); }
    // Second over first harmonic.
    [[nodiscard]] double ratio() const;
    [[nodiscard]] double evaluate(double phi) const;
};

void to_json(nlohmann::json& j, const HarmonicSeries& s);

inline constexpr int kProductionGrid = 4096;

// Samples f at phi_k = 2 pi k / n, k = 0..n-1.
std::vector<double> sample_potential(const std::function<double(double)>& f, int n);

// Cosine projection by the trapezoid rule. Samples must cover [0, 2 pi) on a
// uniform grid, number at least 8 * max_order, and be even in phi.
HarmonicSeries fourier_harmonics(std::span<const double> samples, int max_order, std::string model_tag = "sampled");

// -sqrt(1 - tau sin^2(phi/2)), single channel.
HarmonicSeries transparent_junction_harmonics(double tau, int max_order, int grid = kProductionGrid);

// -2 sqrt(cos^2(phi/2) + eta^2 sin^2(phi/2)), two junctions in series with
// asymmetry eta.
HarmonicSeries rhombus_harmonics(double eta, int max_order, int grid = kProductionGrid);

// Closed-form small-asymmetry coefficients of the rhombus.
struct RhombusExpansion {
    double ej0 = 0.0;
    double ej1 = 0.0;
    double ej2 = 0.0;
};
RhombusExpansion rhombus_printed_expansion(double eta);

// -ej / (4 el).
double kite_small_inductance_ratio(double ej, double el);

struct FlowermonRatio {
    double value = 0.0;
    bool pole = false;
};
// ek_over_ej / cos(2 theta); pole when cos(2 theta) vanishes.
FlowermonRatio flowermon_ratio(double theta, double ek_over_ej);

enum class RowSource { computed, literature, out_of_scope };

struct ImplementationRow {
    std::string name;
    double ratio_lo = 0.0;
    double ratio_hi = 0.0;
    RowSource source = RowSource::computed;
    std::string note;
};

std::vector<ImplementationRow> implementation_table();

void to_json(nlohmann::json& j, const ImplementationRow& row);

} // namespace cos2phi
