#include "cos2phi/error.hpp"
#include "cos2phi/noise.hpp"
#include "cos2phi/spectrum.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

#include "oracles.hpp"

using namespace cos2phi;

namespace {

constexpr double ns = 1e-9;

CircuitParams fig8_point(double ratio, double dphi, double ng = 0.25)
{
    return with_converged_truncation(CircuitParams::from_ratio(0.5, 0.5 * ratio, -0.1, 0.01, dphi, ng));
}

double total_rate(const DirectedRates& r) { return r.down + r.up; }

} // namespace

TEST(Noise, BoseOccupation)
{
    const double f = 1.0;
    const double t = 0.05;
    const double x = constants::planck * f * 1e9 / (constants::boltzmann * t);
    EXPECT_NEAR(bose_occupation(f, t), 1.0 / (std::exp(x) - 1.0), 1e-15);
    EXPECT_LT(bose_occupation(5.0, 1e-4), 1e-300);
}

TEST(Noise, DetailedBalancePerChannel)
{
    NoiseSpec n;
    for (double f : {0.05, 0.5, 3.0}) {
        const double boltzmann_factor = std::exp(-constants::planck * f * 1e9 / (constants::boltzmann * n.temperature));
        const auto flux = flux_pair_rates(10.0, f, n);
        const auto diel = dielectric_pair_rates(0.3, f, 0.5, n);
        EXPECT_NEAR(flux.up / flux.down, boltzmann_factor, 1e-12);
        EXPECT_NEAR(diel.up / diel.down, boltzmann_factor, 1e-12);
        n.flux_statistics = FluxStatistics::bose;
        const auto bose = flux_pair_rates(10.0, f, n);
        EXPECT_NEAR(bose.up / bose.down, boltzmann_factor, 1e-12);
        n.flux_statistics = FluxStatistics::symmetrized;
    }
}

TEST(Noise, SymmetrizedFluxSplitKeepsTwiceTheBareRate)
{
    NoiseSpec n;
    n.temperature = 1e-4;
    const auto cold = flux_pair_rates(7.0, 0.2, n);
    n.temperature = 0.2;
    const auto hot = flux_pair_rates(7.0, 0.2, n);
    EXPECT_NEAR(total_rate(hot) / total_rate(cold), 1.0, 1e-12);
    const double x = constants::planck * 0.2e9 / (constants::boltzmann * 1e-4);
    EXPECT_NEAR(cold.up / cold.down, std::exp(-x), 1e-9 * std::exp(-x));
}

TEST(Noise, AmplitudeScaling)
{
    const auto p = fig8_point(20, 1e-4);
    NoiseSpec n;
    const double t1 = t1_flux(p, n);
    const double tphi_flux = tphi_1f(p, n, Knob::flux);
    const double tphi_charge = tphi_1f(p, n, Knob::charge);
    n.a_phi *= 2.0;
    EXPECT_NEAR(t1_flux(p, n) / t1, 0.25, 1e-12);
    EXPECT_NEAR(tphi_1f(p, n, Knob::flux) / tphi_flux, 0.5, 1e-12);
    n.a_ng *= 3.0;
    EXPECT_NEAR(tphi_1f(p, n, Knob::charge) / tphi_charge, 1.0 / 3.0, 1e-12);
    n.q_cap *= 0.5;
    EXPECT_NEAR(t1_dielectric(p, n) / t1_dielectric(p, NoiseSpec{}), 0.5, 1e-12);
}

TEST(Noise, TimesShrinkWithAmplitude)
{
    const auto p = fig8_point(20, 1e-3);
    NoiseSpec n;
    double last_tphi = 1e300;
    double last_t1 = 1e300;
    for (double a : {1e-7, 1e-6, 3e-6, 1e-5}) {
        n.a_phi = a;
        const auto r = coherence_report(p, n);
        EXPECT_LE(r.tphi_flux, last_tphi);
        EXPECT_LE(r.t1_flux, last_t1);
        last_tphi = r.tphi_flux;
        last_t1 = r.t1_flux;
    }
}

TEST(Noise, RatesAddUp)
{
    for (double dphi : {1e-5, 1e-3}) {
        const auto r = coherence_report(fig8_point(20, dphi), NoiseSpec{});
        EXPECT_NEAR(1.0 / r.t1_total, 1.0 / r.t1_flux + 1.0 / r.t1_dielectric, 1e-12 / r.t1_total);
        EXPECT_NEAR(1.0 / r.tphi_total, 1.0 / r.tphi_flux + 1.0 / r.tphi_charge, 1e-12 / r.tphi_total);
        EXPECT_NEAR(1.0 / r.t2, 0.5 / r.t1_total + 1.0 / r.tphi_total, 1e-12 / r.t2);
        EXPECT_EQ(r.t1_effective, r.t1_total);
        EXPECT_GT(r.t2, 0.0);
    }
}

TEST(Noise, SweetSpotHasNoFirstOrderFluxDephasing)
{
    auto p = with_converged_truncation(CircuitParams::from_ratio(0.5, 10.0, -0.1, 0.0, 0.0, 0.0));
    EXPECT_EQ(tphi_1f(p, NoiseSpec{}, Knob::flux), constants::time_cap_s);
}

TEST(Noise, StrongJunctionsAreFluxDephased)
{
    const auto r = coherence_report(fig8_point(80, 1e-3), NoiseSpec{});
    EXPECT_TRUE(oracle::within_factor(r.tphi_flux, 3.0 * ns, 10.0)) << r.tphi_flux;
}

TEST(Noise, WeakJunctionsAreChargeDephased)
{
    const auto r = coherence_report(fig8_point(1, 1e-5), NoiseSpec{});
    EXPECT_GE(r.tphi_charge, 10.0 * ns / 3.0) << r.tphi_charge;
    EXPECT_LE(r.tphi_charge, 100.0 * ns * 3.0) << r.tphi_charge;
}

TEST(Noise, TransmonDielectricScale)
{
    // EJ/EC = 50 plain transmon: T1 ~ Q / (2 pi f01).
    CircuitParams p{0.25, -12.5, 1e-3, 0.0, 0.0, -0.5, 0.0, 40};
    const double f = transition_frequency(solve(p, 2), 0, 1);
    ASSERT_NEAR(f, 4.7, 0.5);
    NoiseSpec n;
    const double want = n.q_cap / (2.0 * std::numbers::pi * f * 1e9);
    EXPECT_TRUE(oracle::within_factor(t1_dielectric(p, n), want, 3.0)) << t1_dielectric(p, n);
}

TEST(Noise, PureCircuitHasNoDielectricLoss)
{
    const auto p = with_converged_truncation(CircuitParams::from_ratio(0.5, 10.0, -0.1, 0.0, 0.0, 0.25));
    EXPECT_EQ(t1_dielectric(p, NoiseSpec{}), constants::time_cap_s);
}

TEST(Noise, FluxNoiseDominatesDecayInProtectedRegime)
{
    for (double ratio : {20.0, 80.0}) {
        for (double dphi : {1e-5, 1e-4, 1e-3}) {
            const auto r = coherence_report(fig8_point(ratio, dphi), NoiseSpec{});
            EXPECT_GT(r.t1_dielectric, r.t1_flux) << ratio << " " << dphi;
        }
    }
}

TEST(Noise, DegenerateDecayRejected)
{
    const auto p = with_converged_truncation(CircuitParams::from_ratio(0.5, 10.0, -0.1, 0.0, 0.0, 0.5));
    EXPECT_THROW(t1_flux(p, NoiseSpec{}), DegeneracyError);
    EXPECT_THROW(t1_dielectric(p, NoiseSpec{}), DegeneracyError);
    EXPECT_TRUE(coherence_report(p, NoiseSpec{}).degenerate);
}

TEST(Noise, StrongFluxOffsetPrefersLowerBound)
{
    double best = 0.0;
    double best_dphi = 0.0;
    for (int k = 0; k <= 40; ++k) {
        const double dphi = std::pow(10.0, -6.0 + 4.0 * k / 40.0);
        const double t = coherence_report(fig8_point(80, dphi), NoiseSpec{}).tphi_total;
        if (t > best) {
            best = t;
            best_dphi = dphi;
        }
    }
    EXPECT_DOUBLE_EQ(best_dphi, 1e-6);
}

TEST(Noise, LimitingClassification)
{
    CircuitParams p = CircuitParams::from_ratio(0.5, 0.4, -0.1, 0.01, 1e-5, 0.25, 20);
    CoherenceReport r;
    r.tphi_charge = 1.0;
    r.tphi_flux = 1.0;
    EXPECT_EQ(classify_limiting_mechanism(r, p).tag(), "temperature");
    p.ejs2 = 5.0;
    EXPECT_EQ(classify_limiting_mechanism(r, p).tag(), "none");
    r.tphi_charge = 50e-6;
    r.tphi_flux = 500e-6;
    EXPECT_EQ(classify_limiting_mechanism(r, p).tag(), "charge");
    p.ejs2 = 0.5;
    EXPECT_FALSE(classify_limiting_mechanism(r, p).temperature);
}

TEST(Noise, LimitingTagRoundTrip)
{
    for (const char* tag : {"none", "temperature", "charge|flux", "temperature|charge|flux"})
        EXPECT_EQ(LimitingSet::parse(tag).tag(), tag);
    EXPECT_THROW(LimitingSet::parse("magic"), SchemaError);
}

TEST(Noise, ChargeUnits)
{
    NoiseSpec n;
    n.charge_units = ChargeUnits::electrons;
    EXPECT_DOUBLE_EQ(n.charge_amplitude_cp(), 0.5e-4);
}

TEST(Noise, SpecJsonIsStrict)
{
    NoiseSpec n;
    n.temperature = 0.02;
    n.flux_statistics = FluxStatistics::bose;
    const nlohmann::json j = n;
    EXPECT_EQ(j.get<NoiseSpec>(), n);
    auto bad = j;
    bad["tempreature"] = 0.1;
    EXPECT_THROW((void)bad.get<NoiseSpec>(), SchemaError);
    n.a_phi = -1.0;
    EXPECT_THROW(n.validate(), InvalidArgument);
}

TEST(Noise, ReportJsonRoundTrip)
{
    CoherenceOptions opt;
    opt.thermal = true;
    const auto r = coherence_report(fig8_point(20, 1e-4), NoiseSpec{}, opt);
    const nlohmann::json j = r;
    EXPECT_EQ(j.get<CoherenceReport>(), r);
    EXPECT_EQ(nlohmann::json::parse(j.dump()).get<CoherenceReport>(), r);
}

TEST(Noise, SecondOrderOnlyAddsDephasing)
{
    const auto p = fig8_point(20, 0.0, 0.0);
    NoiseSpec n;
    const auto first = coherence_report(p, n);
    n.second_order = true;
    const auto second = coherence_report(p, n);
    EXPECT_LE(second.tphi_flux, first.tphi_flux);
    EXPECT_LT(second.tphi_flux, constants::time_cap_s);
    EXPECT_EQ(second.t1_total, first.t1_total);
}
