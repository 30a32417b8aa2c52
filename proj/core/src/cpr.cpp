#include "cos2phi/cpr.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <nlohmann/json.hpp>

#include "cos2phi/error.hpp"

namespace cos2phi {

namespace {

using std::numbers::pi;

double rms(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

std::string source_name(RowSource s)
{
    switch (s) {
    case RowSource::computed: return "computed";
    case RowSource::literature: return "literature";
    case RowSource::out_of_scope: return "out_of_scope";
    }
    return "computed";
}

} // namespace

double HarmonicSeries::ratio() const
{
    if (order() < 2) throw InvalidArgument("ratio needs at least two harmonics");
    if (coefficients[1] == 0.0) throw InvalidArgument("first harmonic vanishes; ratio undefined");
    return coefficients[2] / coefficients[1];
}

double HarmonicSeries::evaluate(double phi) const
{
    double u = 0.0;
    for (std::size_t m = 0; m < coefficients.size(); ++m) {
        u += coefficients[m] * std::cos(static_cast<double>(m) * phi);
    }
    return u;
}

void to_json(nlohmann::json& j, const HarmonicSeries& s)
{
    j = nlohmann::json{{"model", s.model_tag}, {"coefficients", s.coefficients}};
    if (s.order() >= 2 && s.coefficients[1] != 0.0) j["ratio"] = s.ratio();
}

std::vector<double> sample_potential(const std::function<double(double)>& f, int n)
{
    if (n < 1) throw InvalidArgument("grid must have at least one point");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        out[static_cast<std::size_t>(k)] = f(2.0 * pi * k / n);
    }
    return out;
}

HarmonicSeries fourier_harmonics(std::span<const double> samples, int max_order, std::string model_tag)
{
    if (max_order < 0) throw InvalidArgument("harmonic order must be non-negative");
    const auto n = samples.size();
    if (n < 8 * static_cast<std::size_t>(std::max(max_order, 1))) {
        throw InvalidArgument("grid of " + std::to_string(n) + " points is too coarse for order "
                              + std::to_string(max_order));
    }
    std::vector<double> odd(n);
    for (std::size_t k = 0; k < n; ++k) {
        odd[k] = 0.5 * (samples[k] - samples[(n - k) % n]);
    }
    if (rms(odd) > 1e-8 * std::max(1.0, rms(samples))) {
        throw InvalidArgument("potential is not even in phi; check for a phase offset");
    }
    HarmonicSeries s;
    s.model_tag = std::move(model_tag);
    s.coefficients.assign(static_cast<std::size_t>(max_order) + 1, 0.0);
    for (int m = 0; m <= max_order; ++m) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            acc += samples[k] * std::cos(2.0 * pi * static_cast<double>(m) * static_cast<double>(k) / static_cast<double>(n));
        }
        s.coefficients[static_cast<std::size_t>(m)] = (m == 0 ? 1.0 : 2.0) * acc / static_cast<double>(n);
    }
    return s;
}

HarmonicSeries transparent_junction_harmonics(double tau, int max_order, int grid)
{
    if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("transparency must lie in [0, 1]");
    const auto u = sample_potential(
        [tau](double phi) {
            const double s = std::sin(0.5 * phi);
            return -std::sqrt(std::max(0.0, 1.0 - tau * s * s));
        },
        grid);
    return fourier_harmonics(u, max_order, "transparent_junction");
}

HarmonicSeries rhombus_harmonics(double eta, int max_order, int grid)
{
    if (!(eta >= 0.0 && eta < 1.0)) throw InvalidArgument("rhombus asymmetry must lie in [0, 1)");
    const auto u = sample_potential(
        [eta](double phi) {
            const double c = std::cos(0.5 * phi);
            const double s = std::sin(0.5 * phi);
            return -2.0 * std::sqrt(c * c + eta * eta * s * s);
        },
        grid);
    return fourier_harmonics(u, max_order, "rhombus");
}

RhombusExpansion rhombus_printed_expansion(double eta)
{
    const double e2 = eta * eta;
    RhombusExpansion r;
    r.ej0 = -2.0 * (2.0 + e2 * (std::log(4.0) - 1.0)) / pi;
    r.ej1 = -4.0 * (2.0 - e2 * (std::log(64.0) - 5.0)) / (3.0 * pi);
    r.ej2 = 2.0 * (4.0 - 3.0 * e2 * (5.0 * std::log(16.0) - 26.0)) / (15.0 * pi);
    return r;
}

double kite_small_inductance_ratio(double ej, double el)
{
    if (!(el > 0.0)) throw InvalidArgument("inductive energy must be positive");
    return -ej / (4.0 * el);
}

FlowermonRatio flowermon_ratio(double theta, double ek_over_ej)
{
    const double c = std::cos(2.0 * theta);
    if (std::abs(c) < 1e-12) {
        return {std::copysign(std::numeric_limits<double>::infinity(), ek_over_ej), true};
    }
    return {ek_over_ej / c, false};
}

std::vector<ImplementationRow> implementation_table()
{
    std::vector<ImplementationRow> rows;
    const double rhombus = rhombus_harmonics(0.0, 4).ratio();
    rows.push_back({"Rhombus", rhombus, rhombus, RowSource::computed, "symmetric rhombus, eta = 0"});

    const double tau_hi = transparent_junction_harmonics(1.0, 4).ratio();
    const double tau_lo = transparent_junction_harmonics(0.9, 4).ratio();
    rows.push_back({"Pinhole JJ (transparent channel)", tau_hi, tau_lo, RowSource::computed,
                    "single channel with tau in [0.9, 1]; literature value -0.1"});

    const double kite = kite_small_inductance_ratio(0.1, 1.0);
    rows.push_back({"KITE (low inductance)", kite, kite, RowSource::computed, "E_J / E_L = 0.1"});
    rows.push_back({"KITE (high inductance)", -0.04, -0.04, RowSource::out_of_scope,
                    "needs spectrum fitting of a multi-mode circuit"});

    rows.push_back({"Germanium", -0.1, -0.1, RowSource::literature, "reported value"});
    rows.push_back({"Graphene", -0.1, -0.1, RowSource::literature, "reported value"});
    rows.push_back({"InAs", -0.2, -0.1, RowSource::literature, "reported range"});

    const double deg = pi / 180.0;
    const double near_pole = flowermon_ratio(45.0 * deg - 0.2 * deg, 0.1).value;
    const double far = flowermon_ratio(0.0, 0.1).value;
    rows.push_back({"Flowermon", far, near_pole, RowSource::computed,
                    "E_kappa / E_J = 0.1, twist in [0, 44.8] deg; mirrored negative branch past 45 deg"});
    return rows;
}

void to_json(nlohmann::json& j, const ImplementationRow& row)
{
    j = nlohmann::json{{"name", row.name},
                       {"ratio_lo", row.ratio_lo},
                       {"ratio_hi", row.ratio_hi},
                       {"source", source_name(row.source)},
                       {"note", row.note}};
}

} // namespace cos2phi
