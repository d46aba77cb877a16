#include "dickman/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace dickman {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr Complex kI{0.0, 1.0};

void require_n(std::int64_t n, const char* what) {
  if (n < 1) throw DomainError(std::string(what) + ": n must be >= 1");
}

void require_tau(double tau, const char* what) {
  if (!std::isfinite(tau)) throw DomainError(std::string(what) + ": non-finite tau");
  if (std::abs(tau) > kPi) throw DomainError(std::string(what) + ": requires |tau| <= pi");
}

// g_tau(v) = i tau / (1 - e^{-i tau v}) - 1/v.
Complex g_tau(double tau, double v) {
  const double x = tau * v;
  if (std::abs(x) < 0.5) {
    // z/(1 - e^{-z}) = 1 + z/2 + z^2/12 - z^4/720 + z^6/30240 - z^8/1209600 + z^10/47900160
    const double x2 = x * x;
    const double re =
        -x * (1.0 / 12.0 + x2 * (1.0 / 720.0 + x2 * (1.0 / 30240.0 +
                                                     x2 * (1.0 / 1209600.0 + x2 / 47900160.0))));
    return tau * Complex{re, 0.5};
  }
  return kI * tau / (-expm1i(-x)) - 1.0 / v;
}

// log(1 + x) - x.
Complex log1p_minus(Complex x) {
  if (std::abs(x) < 0.25) {
    Complex power = x;
    Complex sum{0.0, 0.0};
    for (int j = 2; j < 64; ++j) {
      power *= x;
      const Complex term = power / static_cast<double>(j);
      sum += (j % 2 == 0) ? -term : term;
      if (std::abs(term) < 1e-18 * std::abs(x) * std::abs(x)) break;
    }
    return sum;
  }
  return std::log(1.0 + x) - x;
}

// sum_{k >= 1} (e^{i tau k} - 1)^2 / k^2.
Complex full_square_sum(double tau) {
  return dilog_unit(2.0 * tau) - 2.0 * dilog_unit(tau) + kZeta2;
}

// sum_{k >= 1} (e^{i tau k} - 1)^3 / k^3.
Complex full_cube_sum(double tau) {
  return trilog_unit(3.0 * tau) - 3.0 * trilog_unit(2.0 * tau) + 3.0 * trilog_unit(tau) - kZeta3;
}

template <class Integrand>
std::pair<Complex, double> gauss_with_estimate(Integrand&& f, int panels) {
  const Complex coarse = composite_gauss(f, 0.0, 1.0, panels, 16);
  const Complex fine = composite_gauss(f, 0.0, 1.0, 2 * panels, 16);
  return {fine, std::abs(fine - coarse) + 16.0 * kEps * std::abs(fine)};
}

}  // namespace

std::string_view kernel_name(Kernel k) {
  switch (k) {
    case Kernel::S_n: return "S_n";
    case Kernel::U: return "U";
    case Kernel::V: return "V";
    case Kernel::V_n: return "V_n";
    case Kernel::W_n: return "W_n";
    case Kernel::a: return "a";
    case Kernel::F: return "F";
    case Kernel::G: return "G";
    case Kernel::phi_n: return "phi_n";
    case Kernel::Wstar_n: return "Wstar_n";
  }
  return "?";
}

std::optional<Kernel> parse_kernel(std::string_view name) {
  for (Kernel k : {Kernel::S_n, Kernel::U, Kernel::V, Kernel::V_n, Kernel::W_n, Kernel::a,
                   Kernel::F, Kernel::G, Kernel::phi_n, Kernel::Wstar_n}) {
    if (kernel_name(k) == name) return k;
  }
  return std::nullopt;
}

bool kernel_uses_n(Kernel k) {
  return k == Kernel::S_n || k == Kernel::V_n || k == Kernel::W_n || k == Kernel::phi_n ||
         k == Kernel::Wstar_n;
}

KernelValue phi_n(std::int64_t n, double tau) {
  require_n(n, "phi_n");
  if (!std::isfinite(tau)) throw DomainError("phi_n: non-finite tau");
  Complex prod{1.0, 0.0};
  for (std::int64_t k = 1; k <= n; ++k) {
    prod *= 1.0 + expm1i(tau * static_cast<double>(k)) / static_cast<double>(k);
  }
  return {Kernel::phi_n, n, tau, prod, 8.0 * kEps * static_cast<double>(n)};
}

KernelValue kernel_S(std::int64_t n, double tau) {
  require_n(n, "kernel_S");
  require_tau(tau, "kernel_S");
  ComplexKahanSum sum;
  double magnitude = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) {
    const Complex term = expm1i(tau * static_cast<double>(k)) / static_cast<double>(k);
    sum += term;
    magnitude += std::abs(term);
  }
  return {Kernel::S_n, n, tau, sum.value(), 4.0 * kEps * magnitude};
}

KernelValue kernel_V(double tau) {
  require_tau(tau, "kernel_V");
  if (tau == 0.0) return {Kernel::V, std::nullopt, tau, {0.0, 0.0}, 0.0};
  auto [value, err] = gauss_with_estimate([tau](double v) { return g_tau(tau, v); }, 2);
  return {Kernel::V, std::nullopt, tau, -value, err};
}

KernelValue kernel_Vn(std::int64_t n, double tau) {
  require_n(n, "kernel_Vn");
  require_tau(tau, "kernel_Vn");
  if (tau == 0.0) return {Kernel::V_n, n, tau, {0.0, 0.0}, 0.0};
  const double freq = static_cast<double>(n) * tau;
  const int panels = std::max(4, static_cast<int>(std::ceil(std::abs(freq) / 2.0)));
  auto [value, err] = gauss_with_estimate(
      [tau, freq](double v) { return expm1i(freq * v) * g_tau(tau, v); }, panels);
  return {Kernel::V_n, n, tau, value, err};
}

KernelValue kernel_U(double tau, std::int64_t direct_terms) {
  require_tau(tau, "kernel_U");
  if (direct_terms < 2) throw DomainError("kernel_U: direct_terms must be >= 2");
  if (tau == 0.0) return {Kernel::U, std::nullopt, tau, {0.0, 0.0}, 0.0};

  const Complex x1 = expm1i(tau);
  ComplexKahanSum direct;
  direct += kI * tau - x1;
  ComplexKahanSum squares;
  ComplexKahanSum cubes;
  squares += x1 * x1;
  cubes += x1 * x1 * x1;
  for (std::int64_t k = 2; k <= direct_terms; ++k) {
    const Complex x = expm1i(tau * static_cast<double>(k)) / static_cast<double>(k);
    direct += log1p_minus(x);
    const Complex x2 = x * x;
    squares += x2;
    cubes += x2 * x;
  }
  // log(1+x) - x = -x^2/2 + x^3/3 + R, |R| <= |x|^4 / (4 (1 - |x|)).
  const Complex tail2 = full_square_sum(tau) - squares.value();
  const Complex tail3 = full_cube_sum(tau) - cubes.value();
  const Complex value = direct.value() - 0.5 * tail2 + tail3 / 3.0;

  const double K = static_cast<double>(direct_terms);
  const double a = std::abs(tau);
  // |x_k| <= min(|tau|, 2/k): sum_{k>K} |x_k|^4 <= min(16/(3K^3), 4 tau^2 / K).
  const double tail_bound = std::min(16.0 / (3.0 * K * K * K), 4.0 * a * a / K) /
                            (4.0 * (1.0 - 2.0 / (K + 1.0)));
  const double rounding = 64.0 * kEps * (1.0 + std::abs(value));
  return {Kernel::U, std::nullopt, tau, value, tail_bound + rounding};
}

KernelValue kernel_W(std::int64_t n, double tau) {
  require_n(n, "kernel_W");
  require_tau(tau, "kernel_W");
  if (tau == 0.0) return {Kernel::W_n, n, tau, {0.0, 0.0}, 0.0};
  ComplexKahanSum partial;
  for (std::int64_t k = 1; k <= n; ++k) {
    const Complex x = expm1i(tau * static_cast<double>(k)) / static_cast<double>(k);
    partial += x * x;
  }
  const Complex value = 0.5 * (full_square_sum(tau) - partial.value());
  return {Kernel::W_n, n, tau, value, 32.0 * kEps};
}

KernelValue kernel_a(double tau) {
  require_tau(tau, "kernel_a");
  if (std::abs(tau) < 0.1) {
    const double t2 = tau * tau;
    const double im =
        tau * (1.0 / 12.0 + t2 * (1.0 / 720.0 + t2 * (1.0 / 30240.0 + t2 / 1209600.0)));
    return {Kernel::a, std::nullopt, tau, {0.5, im}, 4.0 * kEps};
  }
  const Complex value = 1.0 / (-expm1i(-tau)) - 1.0 / (kI * tau);
  return {Kernel::a, std::nullopt, tau, value, 8.0 * kEps * (1.0 / std::abs(tau) + 1.0)};
}

KernelValue kernel_F(double tau) {
  require_tau(tau, "kernel_F");
  if (tau == 0.0) return {Kernel::F, std::nullopt, tau, {0.0, 0.0}, 0.0};
  const KernelValue u = kernel_U(tau);
  const KernelValue v = kernel_V(tau);
  const Complex z = u.value + v.value;
  const Complex f = expm1(z);
  const double err = std::abs(1.0 + f) * (u.est_abs_err + v.est_abs_err) + 4.0 * kEps;
  return {Kernel::F, std::nullopt, tau, f, err};
}

ComplexVal kernel_G0() { return {0.0, std::log(2.0) - 0.5}; }

KernelValue kernel_G(double tau) {
  require_tau(tau, "kernel_G");
  constexpr double small = 1e-7;
  if (std::abs(tau) < small) {
    // |G(tau) - G(0)| <= |tau| sup|G'| with |G'| of order one near 0.
    return {Kernel::G, std::nullopt, tau, kernel_G0(), 4.0 * small};
  }
  const KernelValue f = kernel_F(tau);
  return {Kernel::G, std::nullopt, tau, f.value / tau, f.est_abs_err / std::abs(tau)};
}

KernelValue kernel_Wstar(std::int64_t n, double tau) {
  require_n(n, "kernel_Wstar");
  require_tau(tau, "kernel_Wstar");
  const KernelValue a = kernel_a(tau);
  const KernelValue f = kernel_F(tau);
  const double nd = static_cast<double>(n);
  const Complex phase = std::polar(1.0, std::fmod(nd * tau, 2.0 * kPi));
  const Complex value = a.value * (1.0 + f.value) * phase / nd;
  const double err = (a.est_abs_err * std::abs(1.0 + f.value) + std::abs(a.value) * f.est_abs_err) / nd;
  return {Kernel::Wstar_n, n, tau, value, err};
}

KernelValue evaluate_kernel(Kernel k, std::optional<std::int64_t> n, double tau) {
  if (kernel_uses_n(k) && !n) {
    throw DomainError("kernel " + std::string(kernel_name(k)) + " requires n");
  }
  switch (k) {
    case Kernel::S_n: return kernel_S(*n, tau);
    case Kernel::U: return kernel_U(tau);
    case Kernel::V: return kernel_V(tau);
    case Kernel::V_n: return kernel_Vn(*n, tau);
    case Kernel::W_n: return kernel_W(*n, tau);
    case Kernel::a: return kernel_a(tau);
    case Kernel::F: return kernel_F(tau);
    case Kernel::G: return kernel_G(tau);
    case Kernel::phi_n: return phi_n(*n, tau);
    case Kernel::Wstar_n: return kernel_Wstar(*n, tau);
  }
  throw DomainError("unknown kernel");
}

double residual_26(std::int64_t n, double tau) {
  require_n(n, "residual_26");
  require_tau(tau, "residual_26");
  if (tau == 0.0) throw DomainError("residual_26: requires tau != 0");
  const double nd = static_cast<double>(n);
  const Complex hat = rho0_hat(nd * tau);
  if (std::abs(hat) < 1e-250) {
    throw NumericalError("residual_26: |rho0_hat(n tau)| below 1e-250");
  }
  const Complex phi = phi_n(n, tau).value;
  const Complex f = kernel_F(tau).value;
  const Complex a = kernel_a(tau).value;
  const Complex phase = std::polar(1.0, std::fmod(nd * tau, 2.0 * kPi));
  return std::abs(phi / hat - 1.0 - f - a * (1.0 + f) * phase / nd);
}

}  // namespace dickman
