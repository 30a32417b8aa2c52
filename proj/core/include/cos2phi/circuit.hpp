#pragma once

#include <cstdint>

#include <nlohmann/json_fwd.hpp>

#include "cos2phi/charge_basis.hpp"

namespace cos2phi {

// Energies in GHz, flux offset in flux quanta measured from half a flux
// quantum, offset charge in Cooper pairs.
struct CircuitParams {
    double ec = 0.0;
    double ejs1 = 0.0;
    double ejs2 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double dphi = 0.0;
    double ng = 0.0;
    // Basis halfwidth; 0 means "not chosen yet" (see with_converged_truncation).
    int n_trunc = 0;

    // Builds ejs1 = ejs2 / ratio with d1 = d2 = d.
    static CircuitParams from_ratio(double ec, double ejs2, double ratio, double d, double dphi,
                                    double ng, int n_trunc = 0);

    [[nodiscard]] double ratio() const { return ejs2 / ejs1; }

    // Throws InvalidArgument naming the offending field.
    void validate() const;
    // Same checks except n_trunc, which may still be unset.
    void validate_physics() const;

    // Stable 64-bit fingerprint of every field.
    [[nodiscard]] std::uint64_t fingerprint() const noexcept;

    friend bool operator==(const CircuitParams&, const CircuitParams&) = default;
};

void to_json(nlohmann::json& j, const CircuitParams& p);
// Rejects unknown keys; n_trunc is optional.
void from_json(const nlohmann::json& j, CircuitParams& p);

ChargeOperator build_hamiltonian(const CircuitParams& p);

// dH/d(dphi), GHz per flux quantum.
ChargeOperator flux_coupling_operator(const CircuitParams& p);

// dH/d(ng) = -8 Ec (n - ng), GHz per Cooper pair.
ChargeOperator charge_coupling_operator(const CircuitParams& p);

} // namespace cos2phi
