#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace dickman {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kExpGamma = 1.78107241799019798524;       // e^gamma
inline constexpr double kExpMinusGamma = 0.56145948356688516982;  // e^-gamma
inline constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;
inline constexpr double kZeta3 = 1.20205690315959428540;

// A requested argument lies outside the domain an operation supports.
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A request exceeds a configured size cap (memory or work).
class ResourceError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A computation could not deliver a meaningful double result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Neumaier's variant of compensated summation.
class KahanSum {
 public:
  KahanSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexKahanSum {
 public:
  ComplexKahanSum& operator+=(Complex z) noexcept {
    re_ += z.real();
    im_ += z.imag();
    return *this;
  }
  Complex value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  KahanSum re_;
  KahanSum im_;
};

// e^{i theta} - 1 without cancellation near theta = 0.
inline Complex expm1i(double theta) noexcept {
  const double s = std::sin(0.5 * theta);
  return {-2.0 * s * s, std::sin(theta)};
}

// e^z - 1 without cancellation near z = 0.
inline Complex expm1(Complex z) noexcept {
  const double er = std::expm1(z.real());
  const double s = std::sin(0.5 * z.imag());
  const double c = std::cos(z.imag());
  return {er * c - 2.0 * s * s, (er + 1.0) * std::sin(z.imag())};
}

// Gauss-Legendre rule on [-1, 1]; nodes ascending.
struct GaussRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

// Supported orders: 4, 8, 16.
GaussRule gauss_legendre(int order);

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
template <class F>
auto composite_gauss(F&& f, double a, double b, int panels, int order = 16) {
  const GaussRule rule = gauss_legendre(order);
  using R = decltype(f(a));
  const double h = (b - a) / panels;
  if constexpr (std::is_same_v<R, Complex>) {
    ComplexKahanSum acc;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * 0.5 * h * f(mid + 0.5 * h * rule.nodes[i]);
      }
    }
    return acc.value();
  } else {
    KahanSum acc;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * 0.5 * h * f(mid + 0.5 * h * rule.nodes[i]);
      }
    }
    return acc.value();
  }
}

}  // namespace dickman
