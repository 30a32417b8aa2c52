#pragma once

#include <numbers>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "cos2phi/circuit.hpp"
#include "cos2phi/spectrum.hpp"

namespace cos2phi {

namespace constants {
inline constexpr double planck = 6.62607015e-34;   // J s
inline constexpr double boltzmann = 1.380649e-23;  // J / K
// Times longer than this are reported as the cap itself.
inline constexpr double time_cap_s = 1e6;
// 2 ejs2 below this is treated as thermally washed out.
inline constexpr double thermal_floor_ghz = 1.0;
// Dephasing times below this mark a channel as limiting.
inline constexpr double dephasing_threshold_s = 100e-6;
} // namespace constants

enum class ChargeUnits { cooper_pairs, electrons };

// How the classical 1/f flux spectrum is split into emission and absorption.
// `symmetrized` keeps the sum of both directions equal to twice the bare rate
// and imposes detailed balance; `bose` multiplies the bare rate by n+1 and n.
enum class FluxStatistics { symmetrized, bose };

struct NoiseSpec {
    double a_phi = 1e-6;       // flux quanta
    double a_ng = 1e-4;        // in `charge_units`
    double q_cap = 1e6;
    double temperature = 0.050;  // K
    double omega_ir = 2.0 * std::numbers::pi;  // rad / s
    double t_exp = 1e-5;       // s
    ChargeUnits charge_units = ChargeUnits::cooper_pairs;
    FluxStatistics flux_statistics = FluxStatistics::symmetrized;
    bool second_order = false;

    void validate() const;
    // Charge amplitude expressed in Cooper pairs.
    [[nodiscard]] double charge_amplitude_cp() const;

    friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

void to_json(nlohmann::json& j, const NoiseSpec& n);
void from_json(const nlohmann::json& j, NoiseSpec& n);

// Bose occupation at frequency f (GHz); zero at zero temperature.
double bose_occupation(double f_ghz, double temperature);

struct DirectedRates {
    double down = 0.0;  // from the upper to the lower level, 1/s
    double up = 0.0;    // from the lower to the upper level, 1/s
};

// Golden-rule rates for one level pair coupled through dH/dPhi with matrix
// element `coupling` (GHz per flux quantum) at splitting f (GHz).
DirectedRates flux_pair_rates(double coupling, double f_ghz, const NoiseSpec& noise);

// Dielectric loss for a charge matrix element |<i|n|j>|.
DirectedRates dielectric_pair_rates(double charge_element, double f_ghz, double ec, const NoiseSpec& noise);

// First-order 1/f dephasing rate for a frequency gradient in GHz per unit.
double dephasing_rate_1f(double gradient, double amplitude, const NoiseSpec& noise);

double tphi_1f(const CircuitParams& p, const NoiseSpec& noise, Knob knob);
double t1_flux(const CircuitParams& p, const NoiseSpec& noise);
double t1_dielectric(const CircuitParams& p, const NoiseSpec& noise);

inline double time_from_rate(double rate)
{
    return rate > 1.0 / constants::time_cap_s ? 1.0 / rate : constants::time_cap_s;
}

struct LimitingSet {
    bool temperature = false;
    bool charge = false;
    bool flux = false;

    [[nodiscard]] bool empty() const { return !temperature && !charge && !flux; }
    // "temperature|charge|flux" subset in that order, or "none".
    [[nodiscard]] std::string tag() const;
    static LimitingSet parse(const std::string& tag);

    friend bool operator==(const LimitingSet&, const LimitingSet&) = default;
};

struct CoherenceOptions {
    // Multilevel rate reduction over `n_levels` states.
    bool thermal = false;
    int n_levels = 4;
    // Use the leakage-inclusive coherence rate instead of half the decay rate.
    bool thermal_dephasing = false;
};

struct CoherenceReport {
    double f01 = 0.0;  // GHz
    double t1_flux = 0.0;
    double t1_dielectric = 0.0;
    double t1_total = 0.0;
    double tphi_flux = 0.0;
    double tphi_charge = 0.0;
    double tphi_total = 0.0;
    double t2 = 0.0;
    // Equal to t1_total unless the multilevel reduction ran.
    double t1_effective = 0.0;
    // Leakage-inclusive coherence rate; zero unless the multilevel reduction ran.
    double gamma2_thermal = 0.0;
    std::string limiting_channel;
    LimitingSet limits;
    bool degenerate = false;
    bool thermal = false;

    friend bool operator==(const CoherenceReport&, const CoherenceReport&) = default;
};

void to_json(nlohmann::json& j, const CoherenceReport& r);
void from_json(const nlohmann::json& j, CoherenceReport& r);

LimitingSet classify_limiting_mechanism(const CoherenceReport& report, const CircuitParams& p);

CoherenceReport coherence_report(const CircuitParams& p, const NoiseSpec& noise,
                                 const CoherenceOptions& options = {});

} // namespace cos2phi
