#pragma once

#include <nlohmann/json_fwd.hpp>

#include <Eigen/Dense>

#include "cos2phi/circuit.hpp"
#include "cos2phi/noise.hpp"
#include "cos2phi/spectrum.hpp"

namespace cos2phi {

// Transition rates Gamma(i -> j) in 1/s between the lowest levels.
class RateMatrix {
public:
    explicit RateMatrix(int n_levels);
    explicit RateMatrix(Eigen::MatrixXd rates);

    [[nodiscard]] int n_levels() const noexcept { return static_cast<int>(rates_.rows()); }
    [[nodiscard]] double rate(int from, int to) const { return rates_(from, to); }
    void set_rate(int from, int to, double value);
    [[nodiscard]] const Eigen::MatrixXd& rates() const noexcept { return rates_; }

    // dp/dt = G p with G(j, i) = Gamma(i -> j) and G(i, i) = -sum_j Gamma(i -> j).
    [[nodiscard]] Eigen::MatrixXd generator() const;

private:
    Eigen::MatrixXd rates_;
};

void to_json(nlohmann::json& j, const RateMatrix& r);

RateMatrix build_rate_matrix(const CircuitParams& p, const NoiseSpec& noise, int n_levels);
RateMatrix build_rate_matrix(const CircuitParams& p, const Spectrum& s, const NoiseSpec& noise);

struct EffectiveRates {
    double gamma1 = 0.0;  // 1/s
    double gamma2 = 0.0;  // 1/s
};

// Steady-state elimination of levels >= 2.
EffectiveRates effective_qubit_rates(const RateMatrix& r);

} // namespace cos2phi
