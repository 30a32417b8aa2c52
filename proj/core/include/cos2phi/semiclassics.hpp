#pragma once

#include "cos2phi/circuit.hpp"

namespace cos2phi {

// Two persistent-current states split by tunnelling (kappa) and tilted by the
// flux offset with slope alpha.
struct TwoLevelModel {
    double kappa = 0.0;     // GHz, carries the sign of cos(pi ng)
    double alpha = 0.0;     // GHz per flux quantum
    double dphi_max = 0.0;  // flux quanta
};

// Inter-well tunnelling amplitude from the instanton estimate.
double kappa(double ec, double ejs2, double ng);

// |kappa| / (pi |ejs1|): flux window protected by the sweet spot.
double sweetness(const CircuitParams& p);

TwoLevelModel two_level_model(const CircuitParams& p);

// 2 sqrt(kappa^2 + (alpha dphi)^2).
double two_level_f01(const TwoLevelModel& model, double dphi);

} // namespace cos2phi
