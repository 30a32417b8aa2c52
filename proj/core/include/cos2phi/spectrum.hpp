#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cos2phi/charge_basis.hpp"
#include "cos2phi/circuit.hpp"

namespace cos2phi {

// Lowest eigenpairs of one Hamiltonian. Column k of `states` belongs to
// energies[k]; the first non-negligible component of each column is real and
// positive.
struct Spectrum {
    std::vector<double> energies;
    Eigen::MatrixXcd states;
    std::uint64_t params_hash = 0;
    int halfwidth = 0;
    // Spectral norm of the full Hamiltonian.
    double operator_norm = 0.0;

    [[nodiscard]] int levels() const noexcept { return static_cast<int>(energies.size()); }
    [[nodiscard]] Eigen::VectorXcd state(int k) const { return states.col(k); }
};

Spectrum eigensystem(const ChargeOperator& hamiltonian, int levels, std::uint64_t params_hash = 0);

// Builds and diagonalizes the circuit Hamiltonian.
Spectrum solve(const CircuitParams& p, int levels);

// E_j - E_i in GHz.
double transition_frequency(const Spectrum& s, int i, int j);

// <i| op |j>.
complex matrix_element(const Spectrum& s, const ChargeOperator& op, int i, int j);

// True when E_j - E_i is indistinguishable from zero at working precision.
bool is_degenerate(const Spectrum& s, int i = 0, int j = 1);

// max - min of the (lower, upper) transition over ng in [0, 1/2].
double charge_dispersion(const CircuitParams& p, int lower = 0, int upper = 1, int samples = 51);

enum class Knob { charge, flux };

struct Gradient {
    double hellmann_feynman = 0.0;
    double finite_difference = 0.0;
    bool degenerate = false;
};

// d f01 / d(knob) in GHz per Cooper pair (charge) or per flux quantum (flux),
// computed from expectation values and from a five-point difference stencil.
// Throws GradientMismatch when the two disagree beyond 1e-4 relative (1e-8 GHz
// absolute near stationary points). At a degeneracy both values are NaN.
Gradient frequency_gradient(const CircuitParams& p, Knob knob);

// Expectation-value gradient on an existing spectrum.
double hellmann_feynman_gradient(const Spectrum& s, const ChargeOperator& coupling);

// Five-point stencil only, no cross-check.
double finite_difference_gradient(const CircuitParams& p, Knob knob);

// Second derivative of f01 by central differences.
double frequency_curvature(const CircuitParams& p, Knob knob);

// Starting halfwidth ceil(4 (ejs2/ec)^(1/4) + 10).
int truncation_heuristic(double ejs2_over_ec);

// Smallest N (in steps of 10 from the heuristic) where f01 and f12 change by
// less than 1e-8 relative between N and N + 10. Throws ConvergenceError past 400.
int converge_truncation(const CircuitParams& p);

inline CircuitParams with_converged_truncation(CircuitParams p)
{
    if (p.n_trunc == 0) p.n_trunc = converge_truncation(p);
    return p;
}

} // namespace cos2phi
