#include "cos2phi/charge_basis.hpp"

#include <string>

#include "cos2phi/error.hpp"

namespace cos2phi {

namespace {

void require_halfwidth(int halfwidth)
{
    if (halfwidth < 1) {
        throw InvalidArgument("charge basis halfwidth must be >= 1, got " + std::to_string(halfwidth));
    }
}

void require_harmonic(int halfwidth, int m)
{
    require_halfwidth(halfwidth);
    if (m < 1) {
        throw InvalidArgument("harmonic order must be >= 1, got " + std::to_string(m));
    }
    if (m > halfwidth) {
        throw InvalidArgument("harmonic order " + std::to_string(m) + " exceeds basis halfwidth "
                              + std::to_string(halfwidth) + "; the operator would vanish");
    }
}

Eigen::Index dim_of(int halfwidth) { return 2 * static_cast<Eigen::Index>(halfwidth) + 1; }

} // namespace

ChargeOperator::ChargeOperator(int halfwidth, Eigen::MatrixXcd entries)
    : halfwidth_(halfwidth), entries_(std::move(entries))
{
    require_halfwidth(halfwidth);
    if (entries_.rows() != dim_of(halfwidth) || entries_.cols() != dim_of(halfwidth)) {
        throw InvalidArgument("charge operator must be square with dimension 2N+1 = "
                              + std::to_string(dim_of(halfwidth)));
    }
}

ChargeOperator ChargeOperator::zero(int halfwidth)
{
    require_halfwidth(halfwidth);
    return {halfwidth, Eigen::MatrixXcd::Zero(dim_of(halfwidth), dim_of(halfwidth))};
}

ChargeOperator ChargeOperator::identity(int halfwidth)
{
    require_halfwidth(halfwidth);
    return {halfwidth, Eigen::MatrixXcd::Identity(dim_of(halfwidth), dim_of(halfwidth))};
}

Eigen::Index ChargeOperator::index_of(int charge) const
{
    if (charge < -halfwidth_ || charge > halfwidth_) {
        throw InvalidArgument("charge " + std::to_string(charge) + " outside the truncated basis");
    }
    return static_cast<Eigen::Index>(charge + halfwidth_);
}

double ChargeOperator::hermiticity_defect() const
{
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

ChargeOperator& ChargeOperator::operator+=(const ChargeOperator& other)
{
    if (other.halfwidth_ != halfwidth_) {
        throw InvalidArgument("cannot add charge operators of different truncation");
    }
    entries_ += other.entries_;
    return *this;
}

ChargeOperator& ChargeOperator::operator-=(const ChargeOperator& other)
{
    if (other.halfwidth_ != halfwidth_) {
        throw InvalidArgument("cannot subtract charge operators of different truncation");
    }
    entries_ -= other.entries_;
    return *this;
}

ChargeOperator& ChargeOperator::operator*=(double scale)
{
    entries_ *= scale;
    return *this;
}

ChargeOperator charge_number_operator(int halfwidth)
{
    auto op = ChargeOperator::zero(halfwidth);
    Eigen::MatrixXcd m = op.matrix();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        m(i, i) = static_cast<double>(op.charge_at(i));
    }
    return {halfwidth, std::move(m)};
}

ChargeOperator cos_m_phi_operator(int halfwidth, int m)
{
    require_harmonic(halfwidth, m);
    const Eigen::Index n = dim_of(halfwidth);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index k = 0; k + m < n; ++k) {
        a(k + m, k) = 0.5;
        a(k, k + m) = 0.5;
    }
    return {halfwidth, std::move(a)};
}

ChargeOperator sin_m_phi_operator(int halfwidth, int m)
{
    require_harmonic(halfwidth, m);
    const Eigen::Index n = dim_of(halfwidth);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    const complex half_i{0.0, 0.5};
    for (Eigen::Index k = 0; k + m < n; ++k) {
        a(k + m, k) = -half_i;
        a(k, k + m) = half_i;
    }
    return {halfwidth, std::move(a)};
}

} // namespace cos2phi
