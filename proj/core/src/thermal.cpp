#include "cos2phi/thermal.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cos2phi/error.hpp"

namespace cos2phi {

RateMatrix::RateMatrix(int n_levels)
{
    if (n_levels < 2) throw InvalidArgument("rate matrix needs at least two levels");
    rates_ = Eigen::MatrixXd::Zero(n_levels, n_levels);
}

RateMatrix::RateMatrix(Eigen::MatrixXd rates) : rates_(std::move(rates))
{
    if (rates_.rows() != rates_.cols() || rates_.rows() < 2) {
        throw InvalidArgument("rate matrix must be square with at least two levels");
    }
    for (Eigen::Index i = 0; i < rates_.rows(); ++i) {
        for (Eigen::Index j = 0; j < rates_.cols(); ++j) {
            if (i == j) {
                rates_(i, j) = 0.0;
            } else if (!(rates_(i, j) >= 0.0) || !std::isfinite(rates_(i, j))) {
                throw InvalidArgument("transition rates must be finite and non-negative");
            }
        }
    }
}

void RateMatrix::set_rate(int from, int to, double value)
{
    if (from == to) throw InvalidArgument("diagonal rates are implied by the off-diagonal ones");
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw InvalidArgument("transition rates must be finite and non-negative");
    }
    rates_(from, to) = value;
}

Eigen::MatrixXd RateMatrix::generator() const
{
    Eigen::MatrixXd g = rates_.transpose();
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        g(i, i) = -rates_.row(i).sum();
    }
    return g;
}

void to_json(nlohmann::json& j, const RateMatrix& r)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < r.n_levels(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < r.n_levels(); ++k) row.push_back(r.rate(i, k));
        rows.push_back(row);
    }
    j = nlohmann::json{{"n_levels", r.n_levels()}, {"rates_per_s", rows}};
}

RateMatrix build_rate_matrix(const CircuitParams& p, const NoiseSpec& noise, int n_levels)
{
    if (n_levels < 2) throw InvalidArgument("rate matrix needs at least two levels");
    return build_rate_matrix(p, solve(p, n_levels), noise);
}

RateMatrix build_rate_matrix(const CircuitParams& p, const Spectrum& s, const NoiseSpec& noise)
{
    noise.validate();
    const int n = s.levels();
    if (n < 2) throw InvalidArgument("rate matrix needs at least two levels");
    const Eigen::MatrixXcd flux = s.states.adjoint() * flux_coupling_operator(p).matrix() * s.states;
    const Eigen::MatrixXcd number = s.states.adjoint() * charge_number_operator(p.n_trunc).matrix() * s.states;

    RateMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double f = s.energies[static_cast<std::size_t>(j)] - s.energies[static_cast<std::size_t>(i)];
            const auto fl = flux_pair_rates(std::abs(flux(i, j)), f, noise);
            const auto di = dielectric_pair_rates(std::abs(number(i, j)), f, p.ec, noise);
            r.set_rate(i, j, fl.up + di.up);
            r.set_rate(j, i, fl.down + di.down);
        }
    }
    return r;
}

EffectiveRates effective_qubit_rates(const RateMatrix& r)
{
    const int n = r.n_levels();
    const auto& g = r.rates();
    EffectiveRates out;
    out.gamma2 = 0.5 * (g.row(0).sum() + g.row(1).sum());

    std::vector<int> kept;
    for (int k = 2; k < n; ++k) {
        const double outflow = g.row(k).sum();
        const double inflow = g.col(k).sum();
        if (outflow > 0.0) {
            kept.push_back(k);
        } else if (inflow > 0.0) {
            throw Error("level " + std::to_string(k) + " has no outgoing transitions; the higher-level block is singular");
        }
    }

    const Eigen::MatrixXd full = r.generator();
    const Eigen::Matrix2d a = full.topLeftCorner(2, 2);
    if (kept.empty()) {
        out.gamma1 = a(1, 0) + a(0, 1);
        return out;
    }
    const auto m = static_cast<Eigen::Index>(kept.size());
    Eigen::MatrixXd b(2, m), c(m, 2), d(m, m);
    for (Eigen::Index u = 0; u < m; ++u) {
        for (int q = 0; q < 2; ++q) {
            b(q, u) = full(q, kept[static_cast<std::size_t>(u)]);
            c(u, q) = full(kept[static_cast<std::size_t>(u)], q);
        }
        for (Eigen::Index v = 0; v < m; ++v) {
            d(u, v) = full(kept[static_cast<std::size_t>(u)], kept[static_cast<std::size_t>(v)]);
        }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(d);
    if (!lu.isInvertible()) {
        throw Error("higher-level block of the rate generator is singular");
    }
    const Eigen::Matrix2d lambda = a - b * lu.solve(c);
    out.gamma1 = lambda(1, 0) + lambda(0, 1);
    return out;
}

} // namespace cos2phi
