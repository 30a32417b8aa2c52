#include "cos2phi/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cos2phi/error.hpp"

namespace cos2phi {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxHalfwidth = 400;

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v)
{
    const double scale = v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > 1e-8 * scale) {
            v *= std::conj(v(i)) / mag;
            v(i) = mag;
            return;
        }
    }
}

double f01_of(const CircuitParams& p)
{
    const auto s = solve(p, 2);
    return transition_frequency(s, 0, 1);
}

CircuitParams shifted(CircuitParams p, Knob knob, double delta)
{
    if (knob == Knob::charge) {
        p.ng += delta;
    } else {
        p.dphi += delta;
    }
    return p;
}

double stencil_step(const CircuitParams& p, Knob knob, double f01)
{
    if (knob == Knob::charge) return 1e-3;
    const double slope_bound = std::numbers::pi * std::abs(p.ejs1) + 2.0 * std::numbers::pi * std::abs(p.ejs2);
    const double scale = std::max(std::abs(p.dphi), f01 / slope_bound);
    return std::clamp(1e-2 * scale, 1e-10, 1e-3);
}

} // namespace

Spectrum eigensystem(const ChargeOperator& hamiltonian, int levels, std::uint64_t params_hash)
{
    const auto dim = hamiltonian.dim();
    if (levels < 1 || levels > dim) {
        throw InvalidArgument("requested " + std::to_string(levels) + " levels from a "
                              + std::to_string(dim) + "-dimensional operator");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(hamiltonian.matrix());
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eigensolver did not converge: dim=" << dim
            << " frobenius_norm=" << hamiltonian.matrix().norm()
            << " hermiticity_defect=" << hamiltonian.hermiticity_defect();
        throw ConvergenceError(msg.str());
    }
    const auto& values = solver.eigenvalues();
    Spectrum s;
    s.params_hash = params_hash;
    s.halfwidth = hamiltonian.halfwidth();
    s.operator_norm = std::max(std::abs(values(0)), std::abs(values(dim - 1)));
    s.energies.assign(values.data(), values.data() + levels);
    s.states = solver.eigenvectors().leftCols(levels);
    for (int k = 0; k < levels; ++k) {
        fix_phase(s.states.col(k));
    }
    return s;
}

Spectrum solve(const CircuitParams& p, int levels)
{
    return eigensystem(build_hamiltonian(p), levels, p.fingerprint());
}

double transition_frequency(const Spectrum& s, int i, int j)
{
    if (i < 0 || j < 0 || i >= s.levels() || j >= s.levels() || i >= j) {
        throw InvalidArgument("transition indices must satisfy 0 <= i < j < levels");
    }
    return std::max(0.0, s.energies[static_cast<std::size_t>(j)] - s.energies[static_cast<std::size_t>(i)]);
}

complex matrix_element(const Spectrum& s, const ChargeOperator& op, int i, int j)
{
    if (op.halfwidth() != s.halfwidth) {
        throw InvalidArgument("operator truncation does not match the spectrum");
    }
    return s.states.col(i).dot(op.matrix() * s.states.col(j));
}

bool is_degenerate(const Spectrum& s, int i, int j)
{
    const double gap = s.energies[static_cast<std::size_t>(j)] - s.energies[static_cast<std::size_t>(i)];
    double reference = 0.0;
    if (s.levels() > j + 1) {
        reference = s.energies[static_cast<std::size_t>(j) + 1] - s.energies[static_cast<std::size_t>(i)];
    }
    return std::abs(gap) <= std::max(1e-10 * reference, 1e3 * kEps * s.operator_norm);
}

double charge_dispersion(const CircuitParams& p, int lower, int upper, int samples)
{
    if (samples < 2) throw InvalidArgument("charge dispersion needs at least two samples");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 0; k < samples; ++k) {
        auto q = p;
        q.ng = 0.5 * static_cast<double>(k) / static_cast<double>(samples - 1);
        const auto s = solve(q, upper + 1);
        const double f = transition_frequency(s, lower, upper);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    return hi - lo;
}

double hellmann_feynman_gradient(const Spectrum& s, const ChargeOperator& coupling)
{
    return matrix_element(s, coupling, 1, 1).real() - matrix_element(s, coupling, 0, 0).real();
}

double finite_difference_gradient(const CircuitParams& p, Knob knob)
{
    const double h = stencil_step(p, knob, f01_of(p));
    const double fp1 = f01_of(shifted(p, knob, h));
    const double fm1 = f01_of(shifted(p, knob, -h));
    const double fp2 = f01_of(shifted(p, knob, 2.0 * h));
    const double fm2 = f01_of(shifted(p, knob, -2.0 * h));
    return (8.0 * (fp1 - fm1) - (fp2 - fm2)) / (12.0 * h);
}

double frequency_curvature(const CircuitParams& p, Knob knob)
{
    const double f0 = f01_of(p);
    const double h = stencil_step(p, knob, f0);
    const double fp1 = f01_of(shifted(p, knob, h));
    const double fm1 = f01_of(shifted(p, knob, -h));
    const double fp2 = f01_of(shifted(p, knob, 2.0 * h));
    const double fm2 = f01_of(shifted(p, knob, -2.0 * h));
    return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
}

Gradient frequency_gradient(const CircuitParams& p, Knob knob)
{
    const auto s = solve(p, 3);
    Gradient g;
    if (is_degenerate(s)) {
        g.degenerate = true;
        g.hellmann_feynman = std::numeric_limits<double>::quiet_NaN();
        g.finite_difference = g.hellmann_feynman;
        return g;
    }
    const auto coupling = knob == Knob::charge ? charge_coupling_operator(p) : flux_coupling_operator(p);
    g.hellmann_feynman = hellmann_feynman_gradient(s, coupling);
    g.finite_difference = finite_difference_gradient(p, knob);
    const double diff = std::abs(g.hellmann_feynman - g.finite_difference);
    const double size = std::max(std::abs(g.hellmann_feynman), std::abs(g.finite_difference));
    if (diff > std::max(1e-4 * size, 1e-8)) {
        std::ostringstream msg;
        msg << "gradient cross-check failed: expectation=" << g.hellmann_feynman
            << " difference=" << g.finite_difference
            << " f01=" << transition_frequency(s, 0, 1) << " GHz (possible near-degeneracy)";
        throw GradientMismatch(msg.str());
    }
    return g;
}

int truncation_heuristic(double ejs2_over_ec)
{
    if (!(ejs2_over_ec > 0.0)) throw InvalidArgument("ejs2/ec must be positive");
    return static_cast<int>(std::ceil(4.0 * std::pow(ejs2_over_ec, 0.25) + 10.0));
}

int converge_truncation(const CircuitParams& p)
{
    p.validate_physics();
    auto at = [&p](int n) {
        auto q = p;
        q.n_trunc = n;
        return solve(q, 3);
    };
    int n = std::max(truncation_heuristic(p.ejs2 / p.ec), static_cast<int>(std::ceil(std::abs(p.ng))) + 2);
    auto current = at(n);
    while (n + 10 <= kMaxHalfwidth) {
        auto next = at(n + 10);
        const double floor = 64.0 * kEps * std::max(current.operator_norm, next.operator_norm);
        bool stable = true;
        for (int k = 0; k < 2; ++k) {
            const double a = transition_frequency(current, k, k + 1);
            const double b = transition_frequency(next, k, k + 1);
            if (std::abs(a - b) > 1e-8 * std::abs(a) + floor) stable = false;
        }
        if (stable) return n;
        n += 10;
        current = std::move(next);
    }
    throw ConvergenceError("truncation did not converge by N = " + std::to_string(kMaxHalfwidth));
}

} // namespace cos2phi
