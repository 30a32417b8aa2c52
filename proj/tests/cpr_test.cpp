#include "cos2phi/cpr.hpp"
#include "cos2phi/error.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"

using namespace cos2phi;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double deg = pi / 180.0;

double transparent(double tau, double phi)
{
    const double s = std::sin(0.5 * phi);
    return -std::sqrt(std::max(0.0, 1.0 - tau * s * s));
}

} // namespace

TEST(Cpr, PureSecondHarmonic)
{
    const auto u = sample_potential([](double phi) { return std::cos(2.0 * phi); }, 256);
    const auto h = fourier_harmonics(u, 6);
    EXPECT_NEAR(h[2], 1.0, 1e-12);
    for (int m : {0, 1, 3, 4, 5, 6}) EXPECT_LT(std::abs(h[m]), 1e-12) << m;
}

TEST(Cpr, ConstantPotential)
{
    const auto u = sample_potential([](double) { return -3.0; }, 64);
    const auto h = fourier_harmonics(u, 4);
    EXPECT_NEAR(h[0], -3.0, 1e-14);
    for (int m = 1; m <= 4; ++m) EXPECT_LT(std::abs(h[m]), 1e-14);
}

TEST(Cpr, RejectsCoarseGridAndOddPotential)
{
    const auto u = sample_potential([](double phi) { return std::cos(phi); }, 30);
    EXPECT_THROW(fourier_harmonics(u, 4), InvalidArgument);
    const auto odd = sample_potential([](double phi) { return std::sin(phi); }, 64);
    EXPECT_THROW(fourier_harmonics(odd, 4), InvalidArgument);
}

TEST(Cpr, TransparentJunctionAgainstFineQuadrature)
{
    const auto h = transparent_junction_harmonics(0.9, 6);
    for (int m = 0; m <= 6; ++m) {
        const double want = oracle::cosine_coefficient([](double phi) { return transparent(0.9, phi); }, m, 65536);
        EXPECT_NEAR(h[m], want, 1e-9) << m;
    }
}

TEST(Cpr, FullTransparencyRatio)
{
    EXPECT_NEAR(transparent_junction_harmonics(1.0, 4).ratio(), -0.2, 1e-3);
}

TEST(Cpr, OpaqueJunctionIsFlat)
{
    const auto h = transparent_junction_harmonics(0.0, 4);
    for (int m = 1; m <= 4; ++m) EXPECT_LT(std::abs(h[m]), 1e-14);
}

TEST(Cpr, TypicalTransparenciesFallInBand)
{
    for (double tau : {0.7, 0.8, 0.9}) {
        const double r = transparent_junction_harmonics(tau, 4).ratio();
        EXPECT_GE(r, -0.2) << tau;
        EXPECT_LE(r, -0.1) << tau;
    }
}

TEST(Cpr, RatioMonotoneInTransparency)
{
    double last = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double r = transparent_junction_harmonics(0.5 + 0.05 * k, 4).ratio();
        EXPECT_LT(r, last);
        EXPECT_LT(r, 0.0);
        last = r;
    }
}

TEST(Cpr, ParsevalBound)
{
    for (double tau : {0.3, 0.9, 1.0}) {
        const int n = kProductionGrid;
        const auto u = sample_potential([tau](double phi) { return transparent(tau, phi); }, n);
        double norm = 0.0;
        for (double v : u) norm += v * v;
        norm /= n;
        const auto h = fourier_harmonics(u, 20);
        double sum = h[0] * h[0];
        for (int m = 1; m <= 20; ++m) sum += 0.5 * h[m] * h[m];
        EXPECT_LE(sum, norm * (1.0 + 1e-12));
    }
}

TEST(Cpr, ReconstructionMatchesSource)
{
    const auto h = transparent_junction_harmonics(0.8, 40);
    double worst = 0.0;
    for (int k = 0; k < 1024; ++k) {
        const double phi = 2.0 * pi * k / 1024;
        worst = std::max(worst, std::abs(h.evaluate(phi) - transparent(0.8, phi)));
    }
    EXPECT_LT(worst, 1e-8);
}

TEST(Cpr, SymmetricRhombusIsFullyTransparentJunction)
{
    const auto r = rhombus_harmonics(0.0, 5);
    const auto t = transparent_junction_harmonics(1.0, 5);
    for (int m = 0; m <= 5; ++m) EXPECT_NEAR(r[m], 2.0 * t[m], 1e-12);
    EXPECT_NEAR(r.ratio(), -0.2, 1e-3);
}

TEST(Cpr, RhombusExpansionAtSmallAsymmetry)
{
    const auto h = rhombus_harmonics(0.1, 4, 65536);
    const auto e = rhombus_printed_expansion(0.1);
    EXPECT_NEAR(h[1] / e.ej1, 1.0, 1e-4);
    EXPECT_NEAR(h[2] / e.ej2, 1.0, 1e-4);
}

TEST(Cpr, RhombusExpansionAtZeroAsymmetry)
{
    const auto e = rhombus_printed_expansion(0.0);
    const auto h = rhombus_harmonics(0.0, 4, 65536);
    EXPECT_NEAR(e.ej1, h[1], 1e-6);
    EXPECT_NEAR(e.ej2, h[2], 1e-6);
    EXPECT_NEAR(e.ej2 / e.ej1, -0.2, 1e-14);
}

TEST(Cpr, KiteRatio)
{
    EXPECT_DOUBLE_EQ(kite_small_inductance_ratio(0.1, 1.0), -0.025);
    EXPECT_EQ(kite_small_inductance_ratio(0.0, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(kite_small_inductance_ratio(0.3, 2.0), 3.0 * kite_small_inductance_ratio(0.1, 2.0));
    EXPECT_THROW((void)kite_small_inductance_ratio(0.1, 0.0), InvalidArgument);
}

TEST(Cpr, FlowermonNearPole)
{
    const auto r = flowermon_ratio(45.0 * deg - 0.2 * deg, 0.1);
    EXPECT_FALSE(r.pole);
    EXPECT_NEAR(r.value, 14.3, 0.05);
    EXPECT_LT(std::abs(r.value), 15.0);
    EXPECT_DOUBLE_EQ(flowermon_ratio(0.0, 0.1).value, 0.1);
    EXPECT_LT(flowermon_ratio(45.0 * deg + 0.2 * deg, 0.1).value, 0.0);
    EXPECT_TRUE(flowermon_ratio(45.0 * deg, 0.1).pole);
}

TEST(Cpr, CatalogRows)
{
    const auto rows = implementation_table();
    auto find = [&rows](const std::string& prefix) {
        for (const auto& r : rows)
            if (r.name.starts_with(prefix)) return r;
        ADD_FAILURE() << prefix;
        return ImplementationRow{};
    };
    EXPECT_NEAR(find("Rhombus").ratio_lo, -0.2, 1e-3);
    EXPECT_DOUBLE_EQ(find("KITE (low").ratio_lo, -0.025);
    EXPECT_EQ(find("KITE (high").source, RowSource::out_of_scope);
    for (const char* name : {"Germanium", "Graphene"}) {
        EXPECT_EQ(find(name).source, RowSource::literature);
        EXPECT_DOUBLE_EQ(find(name).ratio_lo, -0.1);
    }
    EXPECT_EQ(find("InAs").source, RowSource::literature);
    for (const auto& r : rows) {
        if (r.name == "Flowermon") {
            EXPECT_GT(r.ratio_lo, 0.0);
            EXPECT_LE(r.ratio_hi, 15.0);
        } else if (r.source == RowSource::computed) {
            EXPECT_LT(r.ratio_lo, 0.0) << r.name;
            EXPECT_LT(r.ratio_hi, 0.0) << r.name;
        }
        const nlohmann::json j = r;
        EXPECT_TRUE(j.contains("source"));
    }
}
