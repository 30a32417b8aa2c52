#include "cos2phi/charge_basis.hpp"
#include "cos2phi/error.hpp"

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

using namespace cos2phi;

namespace {

const complex I{0.0, 1.0};

Eigen::MatrixXcd interior(const Eigen::MatrixXcd& m, int margin)
{
    const Eigen::Index n = m.rows() - 2 * margin;
    return m.block(margin, margin, n, n);
}

} // namespace

TEST(ChargeBasis, NumberOperatorSmall)
{
    const auto n1 = charge_number_operator(1);
    EXPECT_EQ(n1.dim(), 3);
    EXPECT_EQ(n1.matrix(), Eigen::Vector3cd(-1, 0, 1).asDiagonal().toDenseMatrix());
    const auto n2 = charge_number_operator(2);
    Eigen::VectorXcd diag(5);
    diag << -2, -1, 0, 1, 2;
    EXPECT_EQ(n2.matrix(), Eigen::MatrixXcd(diag.asDiagonal()));
}

TEST(ChargeBasis, NumberOperatorTraceless)
{
    for (int n : {1, 2, 5, 17, 40}) EXPECT_EQ(charge_number_operator(n).matrix().trace(), complex{});
}

TEST(ChargeBasis, IndexConvention)
{
    const auto op = ChargeOperator::zero(3);
    EXPECT_EQ(op.charge_at(0), -3);
    EXPECT_EQ(op.index_of(3), 6);
    EXPECT_THROW((void)op.index_of(4), InvalidArgument);
}

TEST(ChargeBasis, CosineFirstHarmonic)
{
    const auto c = cos_m_phi_operator(1, 1);
    Eigen::Matrix3cd want;
    want << 0, 0.5, 0, 0.5, 0, 0.5, 0, 0.5, 0;
    EXPECT_EQ(c.matrix(), Eigen::MatrixXcd(want));
}

TEST(ChargeBasis, CosineSecondHarmonicCouplesAlternateCharges)
{
    const auto c = cos_m_phi_operator(2, 2).matrix();
    for (int j = 0; j < 5; ++j) {
        for (int k = 0; k < 5; ++k) {
            const complex want = std::abs(j - k) == 2 ? complex{0.5} : complex{};
            EXPECT_EQ(c(j, k), want) << j << "," << k;
        }
    }
}

TEST(ChargeBasis, SineFirstHarmonic)
{
    const auto s = sin_m_phi_operator(1, 1).matrix();
    EXPECT_LT(sin_m_phi_operator(1, 1).hermiticity_defect(), 1e-15);
    EXPECT_LT(s.real().norm(), 1e-15);
    EXPECT_LT((s.imag() + s.imag().transpose()).norm(), 1e-15);
    // raise |k> = |k+1>: entry (k+1, k) is 1/(2i).
    EXPECT_EQ(s(1, 0), -0.5 * I);
    EXPECT_EQ(s(0, 1), 0.5 * I);
}

TEST(ChargeBasis, LargestCosineEigenvalueApproachesOne)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(cos_m_phi_operator(20, 1).matrix());
    const double top = es.eigenvalues().maxCoeff();
    EXPECT_GE(top, 0.95);
    EXPECT_LE(top, 1.0);
}

TEST(ChargeBasis, PythagoreanIdentityAwayFromEdges)
{
    for (int m : {1, 2, 3}) {
        const auto c = cos_m_phi_operator(12, m).matrix();
        const auto s = sin_m_phi_operator(12, m).matrix();
        const Eigen::MatrixXcd sum = c * c + s * s;
        const auto block = interior(sum, m);
        EXPECT_LT((block - Eigen::MatrixXcd::Identity(block.rows(), block.cols())).norm(), 1e-14) << m;
    }
}

TEST(ChargeBasis, CommutatorWithNumberOperator)
{
    const auto n = charge_number_operator(10).matrix();
    const auto s = sin_m_phi_operator(10, 1).matrix();
    const auto c = cos_m_phi_operator(10, 1).matrix();
    const Eigen::MatrixXcd comm = n * s - s * n;
    EXPECT_LT((interior(comm, 1) + I * interior(c, 1)).norm(), 1e-14);
}

TEST(ChargeBasis, HermitianAndBanded)
{
    for (int n : {2, 7, 30}) {
        for (int m = 1; m <= std::min(n, 4); ++m) {
            for (const auto& op : {cos_m_phi_operator(n, m), sin_m_phi_operator(n, m)}) {
                EXPECT_LT(op.hermiticity_defect(), 1e-15);
                const auto& a = op.matrix();
                for (Eigen::Index j = 0; j < a.rows(); ++j)
                    for (Eigen::Index k = 0; k < a.cols(); ++k)
                        if (std::abs(j - k) != m) EXPECT_EQ(a(j, k), complex{});
            }
        }
    }
}

TEST(ChargeBasis, RejectsBadArguments)
{
    EXPECT_THROW(charge_number_operator(0), InvalidArgument);
    EXPECT_THROW(cos_m_phi_operator(3, 0), InvalidArgument);
    EXPECT_THROW(cos_m_phi_operator(2, 3), InvalidArgument);
    EXPECT_THROW(sin_m_phi_operator(-1, 1), InvalidArgument);
}

TEST(ChargeBasis, Arithmetic)
{
    const auto a = cos_m_phi_operator(3, 1);
    const auto b = 2.0 * a - a;
    EXPECT_EQ(b.matrix(), a.matrix());
    EXPECT_THROW(a + ChargeOperator::zero(4), InvalidArgument);
}
