#include "cos2phi/elements.hpp"
#include "cos2phi/spectrum.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"

using namespace cos2phi;

namespace {

CircuitParams point(double ratio, double dphi, double d, double ng, double ec = 0.5)
{
    return with_converged_truncation(CircuitParams::from_ratio(ec, ratio * ec, -0.1, d, dphi, ng));
}

} // namespace

TEST(Elements, PureCircuitHasNoChargeElement)
{
    for (double ng : {0.0, 0.25, 0.4}) {
        const auto r = matrix_elements(point(20, 0.0, 0.0, ng));
        EXPECT_LT(r.m_n, 1e-12) << ng;
    }
}

TEST(Elements, TransmonChargeElement)
{
    const double ec = 0.2;
    CircuitParams p{ec, -50.0 * ec, 1e-3, 0.0, 0.0, -0.5, 0.0, 40};
    const auto r = matrix_elements(p);
    EXPECT_NEAR(r.m_n / oracle::transmon_charge_element(50.0 * ec, ec), 1.0, 0.1);
}

TEST(Elements, MeritsReproducibleFromComponents)
{
    for (double dphi : {1e-5, 1e-3, 0.02}) {
        const auto p = point(30, dphi, 0.02, 0.25);
        const auto r = matrix_elements(p);
        EXPECT_GE(r.m_n, 0.0);
        EXPECT_NEAR(first_harmonic_merit(r, p), r.m_1phi, 1e-12 * std::max(1.0, r.m_1phi));
        EXPECT_NEAR(second_harmonic_merit(r, p), r.m_2phi, 1e-12 * std::max(1.0, r.m_2phi));
        const double pi = std::numbers::pi;
        const double m1 = std::abs(r.cos1 * std::cos(pi * dphi) + p.d1 * r.sin1 * std::sin(pi * dphi));
        EXPECT_NEAR(m1, r.m_1phi, 1e-12);
    }
}

TEST(Elements, ChargeElementIndependentOfConventions)
{
    const auto p = point(20, 1e-3, 0.02, 0.3);
    const auto s = solve(p, 2);
    const auto n = charge_number_operator(p.n_trunc);
    const double base = std::abs(matrix_element(s, n, 0, 1));
    auto rotated = s;
    rotated.states.col(1) *= std::polar(1.0, 1.234);
    EXPECT_NEAR(std::abs(matrix_element(rotated, n, 0, 1)), base, 1e-14);
    auto flipped = s;
    flipped.states = s.states.conjugate();
    EXPECT_NEAR(std::abs(matrix_element(flipped, n, 0, 1)), base, 1e-14);
    EXPECT_NEAR(matrix_elements(p, s).m_n, base, 1e-14);
}

TEST(Elements, ParitySeparationOfPureCircuit)
{
    const auto p = point(40, 1e-6, 0.0, 0.25);
    EXPECT_GT(parity_weights(p, 0).even, 0.99);
    EXPECT_GT(parity_weights(p, 1).odd, 0.99);
}

TEST(Elements, ParityMixingAwayFromSweetSpot)
{
    const auto p = point(40, 1e-4, 0.01, 0.25);
    for (int level : {0, 1}) {
        const auto w = parity_weights(p, level);
        EXPECT_NEAR(w.even + w.odd, 1.0, 1e-12);
        EXPECT_GE(w.even, 0.2) << level;
        EXPECT_LE(w.even, 0.8) << level;
    }
    EXPECT_LT(matrix_elements(p).m_n, 0.1);
}

TEST(Elements, SymmetryMetricOfPureGroundState)
{
    const auto m = symmetry_metric(point(20, 0.0, 0.0, 0.0), 0);
    ASSERT_TRUE(m.even.has_value());
    EXPECT_NEAR(*m.even, 1.0, 1e-6);
}

TEST(Elements, SelectionRuleOfSymmetricAndAntisymmetricSectors)
{
    const auto p = point(40, 1e-4, 0.01, 0.25);
    for (int level : {0, 1}) {
        const auto m = symmetry_metric(p, level);
        ASSERT_TRUE(m.even && m.odd) << level;
        EXPECT_GT(*m.even, 0.9) << level;
        EXPECT_LT(*m.odd, -0.9) << level;
    }
}

TEST(Elements, SelectionRuleImpliesSmallChargeElement)
{
    int checked = 0;
    for (double ratio : {10.0, 20.0, 40.0, 80.0, 150.0}) {
        for (double dphi : {1e-6, 1e-5, 1e-4, 1e-3, 3e-3}) {
            const auto p = point(ratio, dphi, 0.01, 0.0);
            const auto s = solve(p, 2);
            bool holds = true;
            for (int level : {0, 1}) {
                const auto m = symmetry_metric(s, p.ng, level);
                holds = holds && m.even && m.odd && *m.even > 0.99 && *m.odd < -0.99;
            }
            if (!holds) continue;
            ++checked;
            EXPECT_LT(matrix_elements(p, s).m_n, 1e-2) << ratio << " " << dphi;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(Elements, ChargeElementRobustAgainstSmallFluxOffsets)
{
    double lo = 1e300;
    double hi = 0.0;
    for (double dphi : {1e-6, 3e-6, 1e-5, 3e-5, 1e-4}) {
        const double m = matrix_elements(point(40, dphi, 0.01, 0.25)).m_n;
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    EXPECT_LT(hi / lo, 10.0);
}

TEST(Elements, ReportJson)
{
    const auto r = matrix_elements(point(20, 1e-3, 0.01, 0.25));
    const nlohmann::json j = r;
    EXPECT_DOUBLE_EQ(j.at("m_n").get<double>(), r.m_n);
    EXPECT_TRUE(j.contains("m_1phi"));
    EXPECT_TRUE(j.contains("m_2phi"));
}
