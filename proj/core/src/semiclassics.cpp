#include "cos2phi/semiclassics.hpp"

#include <cmath>
#include <numbers>

#include "cos2phi/error.hpp"

namespace cos2phi {

using std::numbers::pi;

namespace {

// cos(pi x) with exact zeros at half-integers.
double cos_pi(double x)
{
    const double r = std::abs(std::remainder(x, 2.0));
    return std::sin(pi * (0.5 - r));
}

} // namespace

double kappa(double ec, double ejs2, double ng)
{
    if (!(ec > 0.0) || !(ejs2 > 0.0)) throw InvalidArgument("kappa needs ec > 0 and ejs2 > 0");
    const double x = 2.0 * ejs2 / ec;
    return 8.0 * ec * std::sqrt(2.0 / pi) * std::pow(x, 0.75) * std::exp(-std::sqrt(x)) * cos_pi(ng);
}

double sweetness(const CircuitParams& p)
{
    if (p.ejs1 == 0.0) throw InvalidArgument("sweetness is undefined without a first harmonic");
    return std::abs(kappa(p.ec, p.ejs2, p.ng)) / (pi * std::abs(p.ejs1));
}

TwoLevelModel two_level_model(const CircuitParams& p)
{
    TwoLevelModel m;
    m.kappa = kappa(p.ec, p.ejs2, p.ng);
    m.alpha = pi * std::abs(p.ejs1);
    m.dphi_max = sweetness(p);
    return m;
}

double two_level_f01(const TwoLevelModel& model, double dphi)
{
    return 2.0 * std::hypot(model.kappa, model.alpha * dphi);
}

} // namespace cos2phi
