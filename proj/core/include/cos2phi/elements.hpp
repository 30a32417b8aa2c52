#pragma once

#include <optional>

#include <nlohmann/json_fwd.hpp>

#include "cos2phi/circuit.hpp"
#include "cos2phi/spectrum.hpp"

namespace cos2phi {

// Relaxation figures of merit between the two lowest states.
struct MatrixElementReport {
    double m_n = 0.0;
    double m_1phi = 0.0;
    double m_2phi = 0.0;
    complex cos1{};
    complex sin1{};
    complex cos2{};
    complex sin2{};
    bool degenerate = false;
};

void to_json(nlohmann::json& j, const MatrixElementReport& r);

MatrixElementReport matrix_elements(const CircuitParams& p);
MatrixElementReport matrix_elements(const CircuitParams& p, const Spectrum& s);

// |<0|cos phi|1> cos(pi dphi) + d1 <0|sin phi|1> sin(pi dphi)|
double first_harmonic_merit(const MatrixElementReport& r, const CircuitParams& p);
// |-<0|cos 2phi|1> sin(2 pi dphi) + d2 <0|sin 2phi|1> cos(2 pi dphi)|
double second_harmonic_merit(const MatrixElementReport& r, const CircuitParams& p);

struct ParityWeights {
    double even = 0.0;
    double odd = 0.0;
};

ParityWeights parity_weights(const CircuitParams& p, int level);
ParityWeights parity_weights(const Spectrum& s, int level);

// How charge inversion acts on amplitudes. `junction` measures the phase from
// one junction of the loop (phi - pi/2), which attaches (-1)^(n - c) to the
// reflection n -> 2c - n; `island` reflects amplitudes without a sign.
enum class InversionGauge { junction, island };

// Normalized overlap <psi_sector| R |psi_sector> per parity sector; absent when
// the sector carries less than 1e-6 of the weight.
struct SymmetryMetric {
    std::optional<double> even;
    std::optional<double> odd;
};

SymmetryMetric symmetry_metric(const CircuitParams& p, int level,
                               InversionGauge gauge = InversionGauge::junction);
SymmetryMetric symmetry_metric(const Spectrum& s, double ng, int level,
                               InversionGauge gauge = InversionGauge::junction);

} // namespace cos2phi
