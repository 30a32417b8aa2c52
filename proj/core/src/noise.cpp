#include "cos2phi/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cos2phi/error.hpp"
#include "cos2phi/thermal.hpp"

namespace cos2phi {

namespace {

using std::numbers::pi;
constexpr double kGiga = 1e9;

double angular(double f_ghz) { return 2.0 * pi * kGiga * f_ghz; }

double log_envelope(const NoiseSpec& n) { return std::abs(std::log(n.omega_ir * n.t_exp)); }

// Splitting used inside the spectral densities; degenerate pairs fall back to
// the infrared cutoff.
double regularized_ghz(double f_ghz, const NoiseSpec& n)
{
    return std::max(std::abs(f_ghz), n.omega_ir / (2.0 * pi * kGiga));
}

std::string charge_units_name(ChargeUnits u) { return u == ChargeUnits::electrons ? "electrons" : "cooper_pairs"; }

std::string statistics_name(FluxStatistics s) { return s == FluxStatistics::bose ? "bose" : "symmetrized"; }

struct QubitCouplings {
    double flux_diag0 = 0.0;
    double flux_diag1 = 0.0;
    double charge_diag0 = 0.0;
    double charge_diag1 = 0.0;
    double flux_offdiag = 0.0;
    double number_offdiag = 0.0;
};

QubitCouplings qubit_couplings(const CircuitParams& p, const Spectrum& s)
{
    const auto flux = flux_coupling_operator(p);
    const auto number = charge_number_operator(p.n_trunc);
    QubitCouplings c;
    c.flux_diag0 = matrix_element(s, flux, 0, 0).real();
    c.flux_diag1 = matrix_element(s, flux, 1, 1).real();
    // dH/dng = -8 Ec (n - ng): its diagonal follows from <n>.
    c.charge_diag0 = -8.0 * p.ec * (matrix_element(s, number, 0, 0).real() - p.ng);
    c.charge_diag1 = -8.0 * p.ec * (matrix_element(s, number, 1, 1).real() - p.ng);
    c.flux_offdiag = std::abs(matrix_element(s, flux, 0, 1));
    c.number_offdiag = std::abs(matrix_element(s, number, 0, 1));
    return c;
}

} // namespace

void NoiseSpec::validate() const
{
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InvalidArgument(std::string("noise field '") + field + "' must be positive and finite");
        }
    };
    positive(a_phi, "a_phi");
    positive(a_ng, "a_ng");
    positive(q_cap, "q_cap");
    positive(temperature, "temperature");
    positive(omega_ir, "omega_ir");
    positive(t_exp, "t_exp");
}

double NoiseSpec::charge_amplitude_cp() const
{
    return charge_units == ChargeUnits::electrons ? 0.5 * a_ng : a_ng;
}

void to_json(nlohmann::json& j, const NoiseSpec& n)
{
    j = nlohmann::json{{"a_phi", n.a_phi},
                       {"a_ng", n.a_ng},
                       {"q_cap", n.q_cap},
                       {"temperature", n.temperature},
                       {"omega_ir", n.omega_ir},
                       {"t_exp", n.t_exp},
                       {"charge_units", charge_units_name(n.charge_units)},
                       {"flux_statistics", statistics_name(n.flux_statistics)},
                       {"second_order", n.second_order}};
}

void from_json(const nlohmann::json& j, NoiseSpec& n)
{
    if (!j.is_object()) throw SchemaError("noise spec must be a JSON object");
    static const std::set<std::string> known{"a_phi", "a_ng", "q_cap", "temperature", "omega_ir",
                                             "t_exp", "charge_units", "flux_statistics", "second_order"};
    for (const auto& item : j.items()) {
        if (!known.contains(item.key())) throw SchemaError("unknown noise field '" + item.key() + "'");
    }
    NoiseSpec out;
    auto number = [&j](const char* key, double& dst) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number()) throw SchemaError(std::string("noise field '") + key + "' must be a number");
        dst = j.at(key).get<double>();
    };
    number("a_phi", out.a_phi);
    number("a_ng", out.a_ng);
    number("q_cap", out.q_cap);
    number("temperature", out.temperature);
    number("omega_ir", out.omega_ir);
    number("t_exp", out.t_exp);
    if (j.contains("charge_units")) {
        const auto v = j.at("charge_units").get<std::string>();
        if (v == "cooper_pairs") out.charge_units = ChargeUnits::cooper_pairs;
        else if (v == "electrons") out.charge_units = ChargeUnits::electrons;
        else throw SchemaError("noise field 'charge_units' must be 'cooper_pairs' or 'electrons'");
    }
    if (j.contains("flux_statistics")) {
        const auto v = j.at("flux_statistics").get<std::string>();
        if (v == "symmetrized") out.flux_statistics = FluxStatistics::symmetrized;
        else if (v == "bose") out.flux_statistics = FluxStatistics::bose;
        else throw SchemaError("noise field 'flux_statistics' must be 'symmetrized' or 'bose'");
    }
    if (j.contains("second_order")) {
        if (!j.at("second_order").is_boolean()) throw SchemaError("noise field 'second_order' must be a boolean");
        out.second_order = j.at("second_order").get<bool>();
    }
    out.validate();
    n = out;
}

double bose_occupation(double f_ghz, double temperature)
{
    if (temperature <= 0.0) return 0.0;
    const double x = constants::planck * std::abs(f_ghz) * kGiga / (constants::boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

DirectedRates flux_pair_rates(double coupling, double f_ghz, const NoiseSpec& noise)
{
    const double f = regularized_ghz(f_ghz, noise);
    const double g = angular(std::abs(coupling));
    const double bare = g * g * 2.0 * pi * noise.a_phi * noise.a_phi / angular(f);
    const double nbar = bose_occupation(f, noise.temperature);
    if (noise.flux_statistics == FluxStatistics::bose) {
        return {bare * (nbar + 1.0), bare * nbar};
    }
    const double norm = 2.0 * nbar + 1.0;
    return {2.0 * bare * (nbar + 1.0) / norm, 2.0 * bare * nbar / norm};
}

DirectedRates dielectric_pair_rates(double charge_element, double f_ghz, double ec, const NoiseSpec& noise)
{
    const double f = regularized_ghz(f_ghz, noise);
    const double bare = angular(16.0 * ec) / noise.q_cap * charge_element * charge_element;
    const double nbar = bose_occupation(f, noise.temperature);
    return {bare * (nbar + 1.0), bare * nbar};
}

double dephasing_rate_1f(double gradient, double amplitude, const NoiseSpec& noise)
{
    return amplitude * angular(std::abs(gradient)) * std::sqrt(2.0 * log_envelope(noise));
}

double tphi_1f(const CircuitParams& p, const NoiseSpec& noise, Knob knob)
{
    noise.validate();
    const auto s = solve(p, 3);
    const auto coupling = knob == Knob::charge ? charge_coupling_operator(p) : flux_coupling_operator(p);
    const double amplitude = knob == Knob::charge ? noise.charge_amplitude_cp() : noise.a_phi;
    double rate = dephasing_rate_1f(hellmann_feynman_gradient(s, coupling), amplitude, noise);
    if (noise.second_order) {
        rate += amplitude * amplitude * angular(std::abs(frequency_curvature(p, knob))) * log_envelope(noise);
    }
    return time_from_rate(rate);
}

double t1_flux(const CircuitParams& p, const NoiseSpec& noise)
{
    noise.validate();
    const auto s = solve(p, 2);
    if (is_degenerate(s)) throw DegeneracyError("flux T1 undefined: the qubit levels are degenerate");
    const auto r = flux_pair_rates(std::abs(matrix_element(s, flux_coupling_operator(p), 0, 1)),
                                   transition_frequency(s, 0, 1), noise);
    return time_from_rate(r.down + r.up);
}

double t1_dielectric(const CircuitParams& p, const NoiseSpec& noise)
{
    noise.validate();
    const auto s = solve(p, 2);
    if (is_degenerate(s)) throw DegeneracyError("dielectric T1 undefined: the qubit levels are degenerate");
    const auto r = dielectric_pair_rates(std::abs(matrix_element(s, charge_number_operator(p.n_trunc), 0, 1)),
                                         transition_frequency(s, 0, 1), p.ec, noise);
    return time_from_rate(r.down + r.up);
}

std::string LimitingSet::tag() const
{
    std::string out;
    auto add = [&out](bool on, const char* name) {
        if (!on) return;
        if (!out.empty()) out += '|';
        out += name;
    };
    add(temperature, "temperature");
    add(charge, "charge");
    add(flux, "flux");
    return out.empty() ? "none" : out;
}

LimitingSet LimitingSet::parse(const std::string& tag)
{
    LimitingSet s;
    if (tag == "none") return s;
    std::istringstream in(tag);
    std::string part;
    while (std::getline(in, part, '|')) {
        if (part == "temperature") s.temperature = true;
        else if (part == "charge") s.charge = true;
        else if (part == "flux") s.flux = true;
        else throw SchemaError("unknown limiting mechanism '" + part + "'");
    }
    return s;
}

LimitingSet classify_limiting_mechanism(const CoherenceReport& report, const CircuitParams& p)
{
    LimitingSet s;
    s.temperature = 2.0 * p.ejs2 < constants::thermal_floor_ghz * (1.0 - 1e-9);
    s.charge = report.tphi_charge < constants::dephasing_threshold_s;
    s.flux = report.tphi_flux < constants::dephasing_threshold_s;
    return s;
}

void to_json(nlohmann::json& j, const CoherenceReport& r)
{
    j = nlohmann::json{{"f01_ghz", r.f01},
                       {"t1_flux", r.t1_flux},
                       {"t1_dielectric", r.t1_dielectric},
                       {"t1_total", r.t1_total},
                       {"tphi_flux", r.tphi_flux},
                       {"tphi_charge", r.tphi_charge},
                       {"tphi_total", r.tphi_total},
                       {"t2", r.t2},
                       {"t1_effective", r.t1_effective},
                       {"gamma2_thermal", r.gamma2_thermal},
                       {"limiting_channel", r.limiting_channel},
                       {"limits", r.limits.tag()},
                       {"degenerate", r.degenerate},
                       {"thermal", r.thermal}};
}

void from_json(const nlohmann::json& j, CoherenceReport& r)
{
    CoherenceReport out;
    out.f01 = j.at("f01_ghz").get<double>();
    out.t1_flux = j.at("t1_flux").get<double>();
    out.t1_dielectric = j.at("t1_dielectric").get<double>();
    out.t1_total = j.at("t1_total").get<double>();
    out.tphi_flux = j.at("tphi_flux").get<double>();
    out.tphi_charge = j.at("tphi_charge").get<double>();
    out.tphi_total = j.at("tphi_total").get<double>();
    out.t2 = j.at("t2").get<double>();
    out.t1_effective = j.at("t1_effective").get<double>();
    out.gamma2_thermal = j.at("gamma2_thermal").get<double>();
    out.limiting_channel = j.at("limiting_channel").get<std::string>();
    out.limits = LimitingSet::parse(j.at("limits").get<std::string>());
    out.degenerate = j.at("degenerate").get<bool>();
    out.thermal = j.at("thermal").get<bool>();
    r = out;
}

CoherenceReport coherence_report(const CircuitParams& p, const NoiseSpec& noise, const CoherenceOptions& options)
{
    noise.validate();
    if (options.thermal && options.n_levels < 2) throw InvalidArgument("thermal reduction needs n_levels >= 2");
    const int levels = options.thermal ? std::max(options.n_levels, 3) : 3;
    const auto s = solve(p, levels);
    const auto c = qubit_couplings(p, s);

    CoherenceReport r;
    r.f01 = transition_frequency(s, 0, 1);
    r.degenerate = is_degenerate(s);
    r.thermal = options.thermal;

    const auto flux = flux_pair_rates(c.flux_offdiag, r.f01, noise);
    const auto diel = dielectric_pair_rates(c.number_offdiag, r.f01, p.ec, noise);
    const double gamma1_flux = flux.down + flux.up;
    const double gamma1_diel = diel.down + diel.up;
    const double gamma1 = gamma1_flux + gamma1_diel;

    double gamma_phi_flux = dephasing_rate_1f(c.flux_diag1 - c.flux_diag0, noise.a_phi, noise);
    double gamma_phi_charge = dephasing_rate_1f(c.charge_diag1 - c.charge_diag0, noise.charge_amplitude_cp(), noise);
    if (noise.second_order) {
        const double env = log_envelope(noise);
        gamma_phi_flux += noise.a_phi * noise.a_phi * angular(std::abs(frequency_curvature(p, Knob::flux))) * env;
        const double acp = noise.charge_amplitude_cp();
        gamma_phi_charge += acp * acp * angular(std::abs(frequency_curvature(p, Knob::charge))) * env;
    }
    const double gamma_phi = gamma_phi_flux + gamma_phi_charge;

    r.t1_flux = time_from_rate(gamma1_flux);
    r.t1_dielectric = time_from_rate(gamma1_diel);
    r.t1_total = time_from_rate(gamma1);
    r.tphi_flux = time_from_rate(gamma_phi_flux);
    r.tphi_charge = time_from_rate(gamma_phi_charge);
    r.tphi_total = time_from_rate(gamma_phi);

    double coherence_rate = 0.5 * gamma1 + gamma_phi;
    r.t1_effective = r.t1_total;
    if (options.thermal) {
        const auto eff = effective_qubit_rates(build_rate_matrix(p, s, noise));
        r.t1_effective = time_from_rate(eff.gamma1);
        r.gamma2_thermal = eff.gamma2;
        coherence_rate = options.thermal_dephasing ? eff.gamma2 + gamma_phi : 0.5 * eff.gamma1 + gamma_phi;
    }
    r.t2 = time_from_rate(coherence_rate);

    const std::array<std::pair<double, const char*>, 4> channels{{{r.t1_flux, "flux_decay"},
                                                                 {r.t1_dielectric, "dielectric_decay"},
                                                                 {r.tphi_flux, "flux_dephasing"},
                                                                 {r.tphi_charge, "charge_dephasing"}}};
    r.limiting_channel = std::min_element(channels.begin(), channels.end(), [](const auto& a, const auto& b) {
                             return a.first < b.first;
                         })->second;
    r.limits = classify_limiting_mechanism(r, p);
    return r;
}

} // namespace cos2phi
