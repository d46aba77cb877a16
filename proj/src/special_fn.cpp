#include <cmath>
#include <limits>

#include "dickman/special_fn.hpp"

namespace dickman {
namespace {

constexpr double kSeriesSwitch = 4.0;

// sum_{j >= 1} (i x)^j / (j j!), |x| <= kSeriesSwitch.
Complex int_I_series(double x) {
  double re = 0.0;
  double im = 0.0;
  double power_over_fact = 1.0;  // x^j / j!
  for (int j = 1; j < 200; ++j) {
    power_over_fact *= x / j;
    const double term = power_over_fact / j;
    switch (j % 4) {
      case 1: im += term; break;
      case 2: re -= term; break;
      case 3: im -= term; break;
      default: re += term; break;
    }
    if (std::abs(term) < 1e-18 * (std::abs(re) + std::abs(im))) break;
  }
  return {re, im};
}

// Ci(x) and Si(x) for x > kSeriesSwitch from the continued fraction of
// E1(i x) = -Ci(x) + i (Si(x) - pi/2), evaluated by modified Lentz.
void cisi_continued_fraction(double x, double& ci, double& si) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  Complex b{1.0, x};
  Complex c{1.0 / tiny, 0.0};
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 2; i < 10000; ++i) {
    const double a = -static_cast<double>(i - 1) * (i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const Complex del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) break;
  }
  h *= Complex{std::cos(x), -std::sin(x)};
  ci = -h.real();
  si = 0.5 * kPi + h.imag();
}

}  // namespace

double sine_integral(double x) {
  if (x == 0.0) return 0.0;
  const double ax = std::abs(x);
  double si = 0.0;
  if (ax <= kSeriesSwitch) {
    si = int_I_series(ax).imag();
  } else {
    double ci = 0.0;
    cisi_continued_fraction(ax, ci, si);
  }
  return x < 0.0 ? -si : si;
}

double cosine_integral(double x) {
  if (!(x > 0.0)) throw DomainError("cosine_integral: argument must be positive");
  if (x <= kSeriesSwitch) {
    return kEulerGamma + std::log(x) + int_I_series(x).real();
  }
  double ci = 0.0;
  double si = 0.0;
  cisi_continued_fraction(x, ci, si);
  return ci;
}

ComplexVal int_I(double tau) {
  if (!std::isfinite(tau)) throw DomainError("int_I: non-finite argument");
  if (tau == 0.0) return {0.0, 0.0};
  const double a = std::abs(tau);
  Complex value;
  if (a <= kSeriesSwitch) {
    value = int_I_series(a);
  } else {
    double ci = 0.0;
    double si = 0.0;
    cisi_continued_fraction(a, ci, si);
    value = {ci - kEulerGamma - std::log(a), si};
  }
  return tau < 0.0 ? std::conj(value) : value;
}

ComplexVal rho0_hat(double tau) { return std::exp(int_I(tau)); }

}  // namespace dickman
