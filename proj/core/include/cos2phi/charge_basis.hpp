#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cos2phi {

using complex = std::complex<double>;

// Dense Hermitian operator on the Cooper-pair states |-N>, ..., |+N>.
// Row/column i holds charge i - N.
class ChargeOperator {
public:
    ChargeOperator(int halfwidth, Eigen::MatrixXcd entries);

    static ChargeOperator zero(int halfwidth);
    static ChargeOperator identity(int halfwidth);

    [[nodiscard]] int halfwidth() const noexcept { return halfwidth_; }
    [[nodiscard]] Eigen::Index dim() const noexcept { return entries_.rows(); }
    [[nodiscard]] const Eigen::MatrixXcd& matrix() const noexcept { return entries_; }

    [[nodiscard]] int charge_at(Eigen::Index index) const noexcept
    {
        return static_cast<int>(index) - halfwidth_;
    }
    [[nodiscard]] Eigen::Index index_of(int charge) const;

    // Largest |A(j,k) - conj(A(k,j))|.
    [[nodiscard]] double hermiticity_defect() const;

    ChargeOperator& operator+=(const ChargeOperator& other);
    ChargeOperator& operator-=(const ChargeOperator& other);
    ChargeOperator& operator*=(double scale);

    friend ChargeOperator operator+(ChargeOperator a, const ChargeOperator& b) { return a += b; }
    friend ChargeOperator operator-(ChargeOperator a, const ChargeOperator& b) { return a -= b; }
    friend ChargeOperator operator*(double s, ChargeOperator a) { return a *= s; }
    friend ChargeOperator operator*(ChargeOperator a, double s) { return a *= s; }

private:
    int halfwidth_;
    Eigen::MatrixXcd entries_;
};

ChargeOperator charge_number_operator(int halfwidth);

// cos(m phi) = (raise_m + lower_m) / 2 with raise_m |k> = |k + m>.
ChargeOperator cos_m_phi_operator(int halfwidth, int m);

// sin(m phi) = (raise_m - lower_m) / 2i.
ChargeOperator sin_m_phi_operator(int halfwidth, int m);

} // namespace cos2phi
