#include "cos2phi/circuit.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "cos2phi/error.hpp"

namespace cos2phi {

namespace {

using std::numbers::pi;

void require_finite(double v, const char* field)
{
    if (!std::isfinite(v)) {
        throw InvalidArgument(std::string("circuit field '") + field + "' must be finite");
    }
}

} // namespace

CircuitParams CircuitParams::from_ratio(double ec, double ejs2, double ratio, double d, double dphi,
                                        double ng, int n_trunc)
{
    if (ratio == 0.0 || !std::isfinite(ratio)) {
        throw InvalidArgument("harmonic ratio must be finite and nonzero");
    }
    return CircuitParams{ec, ejs2 / ratio, ejs2, d, d, dphi, ng, n_trunc};
}

void CircuitParams::validate_physics() const
{
    require_finite(ec, "ec");
    require_finite(ejs1, "ejs1");
    require_finite(ejs2, "ejs2");
    require_finite(d1, "d1");
    require_finite(d2, "d2");
    require_finite(dphi, "dphi");
    require_finite(ng, "ng");
    if (ec <= 0.0) throw InvalidArgument("circuit field 'ec' must be > 0");
    if (ejs2 <= 0.0) throw InvalidArgument("circuit field 'ejs2' must be > 0");
    if (std::abs(d1) >= 1.0) throw InvalidArgument("circuit field 'd1' must satisfy |d1| < 1");
    if (std::abs(d2) >= 1.0) throw InvalidArgument("circuit field 'd2' must satisfy |d2| < 1");
}

void CircuitParams::validate() const
{
    validate_physics();
    if (n_trunc < 2) {
        throw InvalidArgument("circuit field 'n_trunc' must be >= 2, got " + std::to_string(n_trunc));
    }
}

std::uint64_t CircuitParams::fingerprint() const noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int byte = 0; byte < 8; ++byte) {
            h ^= (v >> (8 * byte)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    for (double v : {ec, ejs1, ejs2, d1, d2, dphi, ng}) {
        mix(std::bit_cast<std::uint64_t>(v));
    }
    mix(static_cast<std::uint64_t>(n_trunc));
    return h;
}

void to_json(nlohmann::json& j, const CircuitParams& p)
{
    j = nlohmann::json{{"ec", p.ec},     {"ejs1", p.ejs1}, {"ejs2", p.ejs2}, {"d1", p.d1},
                       {"d2", p.d2},     {"dphi", p.dphi}, {"ng", p.ng},     {"n_trunc", p.n_trunc}};
}

void from_json(const nlohmann::json& j, CircuitParams& p)
{
    if (!j.is_object()) throw SchemaError("circuit parameters must be a JSON object");
    static const std::set<std::string> known{"ec", "ejs1", "ejs2", "d1", "d2", "dphi", "ng", "n_trunc"};
    for (const auto& item : j.items()) {
        if (!known.contains(item.key())) {
            throw SchemaError("unknown circuit field '" + item.key() + "'");
        }
    }
    auto number = [&j](const char* key) {
        if (!j.contains(key)) throw SchemaError(std::string("missing circuit field '") + key + "'");
        const auto& v = j.at(key);
        if (!v.is_number()) throw SchemaError(std::string("circuit field '") + key + "' must be a number");
        return v.get<double>();
    };
    CircuitParams out;
    out.ec = number("ec");
    out.ejs1 = number("ejs1");
    out.ejs2 = number("ejs2");
    out.d1 = number("d1");
    out.d2 = number("d2");
    out.dphi = number("dphi");
    out.ng = number("ng");
    if (j.contains("n_trunc")) {
        const auto& v = j.at("n_trunc");
        if (!v.is_number_integer()) throw SchemaError("circuit field 'n_trunc' must be an integer");
        out.n_trunc = v.get<int>();
    }
    p = out;
}

ChargeOperator build_hamiltonian(const CircuitParams& p)
{
    p.validate();
    const int n = p.n_trunc;

    auto h = ChargeOperator::zero(n);
    Eigen::MatrixXcd kinetic = h.matrix();
    for (Eigen::Index i = 0; i < kinetic.rows(); ++i) {
        const double q = h.charge_at(i) - p.ng;
        kinetic(i, i) = 4.0 * p.ec * q * q;
    }
    h = ChargeOperator(n, std::move(kinetic));
    // Shifted forms keep the frustration point exactly free of first harmonics.
    h += -p.ejs1 * std::sin(pi * p.dphi) * cos_m_phi_operator(n, 1);
    h += p.ejs1 * p.d1 * std::cos(pi * p.dphi) * sin_m_phi_operator(n, 1);
    h += -p.ejs2 * std::cos(2.0 * pi * p.dphi) * cos_m_phi_operator(n, 2);
    h += -p.ejs2 * p.d2 * std::sin(2.0 * pi * p.dphi) * sin_m_phi_operator(n, 2);
    return h;
}

ChargeOperator flux_coupling_operator(const CircuitParams& p)
{
    p.validate();
    const int n = p.n_trunc;
    const double a = pi * p.dphi;
    const double b = 2.0 * pi * p.dphi;
    // cos(pi(x + 1/2)) = -sin(pi x), sin(pi(x + 1/2)) = cos(pi x); same for 2 pi.
    auto op = -p.ejs1 * pi * std::cos(a) * cos_m_phi_operator(n, 1);
    op -= p.ejs1 * pi * p.d1 * std::sin(a) * sin_m_phi_operator(n, 1);
    op += p.ejs2 * 2.0 * pi * std::sin(b) * cos_m_phi_operator(n, 2);
    op -= p.ejs2 * 2.0 * pi * p.d2 * std::cos(b) * sin_m_phi_operator(n, 2);
    return op;
}

ChargeOperator charge_coupling_operator(const CircuitParams& p)
{
    p.validate();
    auto op = ChargeOperator::zero(p.n_trunc);
    Eigen::MatrixXcd m = op.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        m(i, i) = -8.0 * p.ec * (op.charge_at(i) - p.ng);
    }
    return {p.n_trunc, std::move(m)};
}

} // namespace cos2phi
