#include "cos2phi/elements.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <nlohmann/json.hpp>

#include "cos2phi/error.hpp"

namespace cos2phi {

namespace {

using std::numbers::pi;

bool is_even(int charge) { return charge % 2 == 0; }

void require_level(const Spectrum& s, int level)
{
    if (level < 0 || level >= s.levels()) {
        throw InvalidArgument("level " + std::to_string(level) + " not in the spectrum");
    }
}

std::optional<double> sector_metric(const Spectrum& s, int level, bool even_sector, double ng,
                                    InversionGauge gauge)
{
    const Eigen::VectorXcd psi = s.state(level);
    const int n_half = s.halfwidth;
    double weight = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        if (is_even(static_cast<int>(i) - n_half) == even_sector) weight += std::norm(psi(i));
    }
    if (weight < 1e-6) return std::nullopt;

    const double center_guess = std::round(2.0 * ng) / 2.0;
    std::vector<int> centers{static_cast<int>(std::floor(center_guess))};
    if (std::ceil(center_guess) != std::floor(center_guess)) {
        centers.push_back(static_cast<int>(std::ceil(center_guess)));
    }
    double best = 0.0;
    for (int c : centers) {
        complex overlap{};
        for (Eigen::Index i = 0; i < psi.size(); ++i) {
            const int n = static_cast<int>(i) - n_half;
            if (is_even(n) != even_sector) continue;
            const int image = 2 * c - n;
            if (image < -n_half || image > n_half) continue;
            double sign = 1.0;
            if (gauge == InversionGauge::junction && std::abs(n - c) % 2 == 1) sign = -1.0;
            overlap += std::conj(psi(i)) * sign * psi(image + n_half);
        }
        const double value = overlap.real() / weight;
        if (std::abs(value) > std::abs(best)) best = value;
    }
    return best;
}

} // namespace

void to_json(nlohmann::json& j, const MatrixElementReport& r)
{
    auto pair = [](complex z) { return nlohmann::json::array({z.real(), z.imag()}); };
    j = nlohmann::json{{"m_n", r.m_n},
                       {"m_1phi", r.m_1phi},
                       {"m_2phi", r.m_2phi},
                       {"cos_phi", pair(r.cos1)},
                       {"sin_phi", pair(r.sin1)},
                       {"cos_2phi", pair(r.cos2)},
                       {"sin_2phi", pair(r.sin2)},
                       {"degenerate", r.degenerate}};
}

MatrixElementReport matrix_elements(const CircuitParams& p)
{
    return matrix_elements(p, solve(p, 3));
}

MatrixElementReport matrix_elements(const CircuitParams& p, const Spectrum& s)
{
    if (s.levels() < 2) throw InvalidArgument("matrix elements need at least two levels");
    const int n = p.n_trunc;
    MatrixElementReport r;
    r.m_n = std::abs(matrix_element(s, charge_number_operator(n), 0, 1));
    r.cos1 = matrix_element(s, cos_m_phi_operator(n, 1), 0, 1);
    r.sin1 = matrix_element(s, sin_m_phi_operator(n, 1), 0, 1);
    r.cos2 = matrix_element(s, cos_m_phi_operator(n, 2), 0, 1);
    r.sin2 = matrix_element(s, sin_m_phi_operator(n, 2), 0, 1);
    r.m_1phi = first_harmonic_merit(r, p);
    r.m_2phi = second_harmonic_merit(r, p);
    r.degenerate = is_degenerate(s);
    return r;
}

double first_harmonic_merit(const MatrixElementReport& r, const CircuitParams& p)
{
    return std::abs(r.cos1 * std::cos(pi * p.dphi) + r.sin1 * p.d1 * std::sin(pi * p.dphi));
}

double second_harmonic_merit(const MatrixElementReport& r, const CircuitParams& p)
{
    return std::abs(-r.cos2 * std::sin(2.0 * pi * p.dphi) + r.sin2 * p.d2 * std::cos(2.0 * pi * p.dphi));
}

ParityWeights parity_weights(const CircuitParams& p, int level)
{
    return parity_weights(solve(p, level + 1), level);
}

ParityWeights parity_weights(const Spectrum& s, int level)
{
    require_level(s, level);
    ParityWeights w;
    const auto psi = s.state(level);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        (is_even(static_cast<int>(i) - s.halfwidth) ? w.even : w.odd) += std::norm(psi(i));
    }
    return w;
}

SymmetryMetric symmetry_metric(const CircuitParams& p, int level, InversionGauge gauge)
{
    return symmetry_metric(solve(p, level + 1), p.ng, level, gauge);
}

SymmetryMetric symmetry_metric(const Spectrum& s, double ng, int level, InversionGauge gauge)
{
    require_level(s, level);
    return {sector_metric(s, level, true, ng, gauge), sector_metric(s, level, false, ng, gauge)};
}

} // namespace cos2phi
