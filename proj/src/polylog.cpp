#include <array>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>

#include "dickman/special_fn.hpp"

namespace dickman {
namespace {

constexpr int kTerms = 40;

// Cl_2(t) = t - t log|t| + sum_n c_n t^{2n+1} on |t| <= pi, where
// c_n = |B_{2n}| / (2n (2n+1)!) = 2 zeta(2n) / ((2 pi)^{2n} 2n (2n+1)).
struct ClausenCoefficients {
  std::array<double, kTerms + 1> c{};
  ClausenCoefficients() {
    for (int n = 1; n <= kTerms; ++n) {
      const double z = boost::math::zeta(2.0 * n);
      c[n] = 2.0 * z / (std::pow(2.0 * kPi, 2 * n) * (2.0 * n) * (2.0 * n + 1.0));
    }
  }
};

const ClausenCoefficients& coefficients() {
  static const ClausenCoefficients cc;
  return cc;
}

// Reduce to [0, 2 pi).
double reduce_2pi(double theta) {
  double r = std::fmod(theta, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

// Reduce to (-pi, pi].
double reduce_pi(double theta) {
  double r = reduce_2pi(theta);
  if (r > kPi) r -= 2.0 * kPi;
  return r;
}

}  // namespace

double clausen2(double theta) {
  const double t = reduce_pi(theta);
  if (t == 0.0) return 0.0;
  const auto& c = coefficients().c;
  const double t2 = t * t;
  double power = t;  // t^{2n+1}
  double series = 0.0;
  for (int n = 1; n <= kTerms; ++n) {
    power *= t2;
    const double term = c[n] * power;
    series += term;
    if (std::abs(term) < 1e-18) break;
  }
  return t - t * std::log(std::abs(t)) + series;
}

ComplexVal dilog_unit(double theta) {
  const double t = reduce_2pi(theta);
  const double re = kZeta2 - 0.5 * kPi * t + 0.25 * t * t;
  return {re, clausen2(theta)};
}

// Re Li_3(e^{it}) = zeta(3) - int_0^t Cl_2, expanded termwise.
ComplexVal trilog_unit(double theta) {
  const double t = reduce_2pi(theta);
  const double im = kZeta2 * t - 0.25 * kPi * t * t + t * t * t / 12.0;

  const double s = reduce_pi(theta);
  double re = kZeta3;
  if (s != 0.0) {
    const auto& c = coefficients().c;
    const double s2 = s * s;
    double power = s2;  // s^{2n+2}
    double series = 0.0;
    for (int n = 1; n <= kTerms; ++n) {
      power *= s2;
      const double term = c[n] * power / (2.0 * n + 2.0);
      series += term;
      if (std::abs(term) < 1e-18) break;
    }
    re += -0.75 * s2 + 0.5 * s2 * std::log(std::abs(s)) - series;
  }
  return {re, im};
}

}  // namespace dickman
