#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "dickman/special_fn.hpp"

namespace dickman {

enum class Kernel { S_n, U, V, V_n, W_n, a, F, G, phi_n, Wstar_n };

std::string_view kernel_name(Kernel k);
std::optional<Kernel> parse_kernel(std::string_view name);
bool kernel_uses_n(Kernel k);

struct KernelValue {
  Kernel kernel;
  std::optional<std::int64_t> n;
  double tau = 0.0;
  ComplexVal value;
  double est_abs_err = 0.0;
};

// Number of terms summed exactly in U before switching to the closed-form
// third-order tail.
inline constexpr std::int64_t kUDirectTerms = 10000;

// E(e^{i tau T_n}) as the finite product of Bernoulli factors.
KernelValue phi_n(std::int64_t n, double tau);

// S_n(tau) = sum_{k <= n} (e^{i tau k} - 1) / k; requires |tau| <= pi.
KernelValue kernel_S(std::int64_t n, double tau);

// V(tau) = -\int_0^1 g_tau(v) dv with g_tau(v) = i tau / (1 - e^{-i tau v}) - 1 / v.
KernelValue kernel_V(double tau);

// V_n(tau) = \int_0^1 (e^{i n tau v} - 1) g_tau(v) dv.
KernelValue kernel_Vn(std::int64_t n, double tau);

// U(tau) = sum_{k >= 1} { log(1 + x_k) - x_k }, x_k = (e^{i tau k} - 1) / k.
// The k = 1 logarithm is taken as i tau; principal branch for k >= 2.
KernelValue kernel_U(double tau, std::int64_t direct_terms = kUDirectTerms);

// W_n(tau) = sum_{k > n} (e^{i tau k} - 1)^2 / (2 k^2).
KernelValue kernel_W(std::int64_t n, double tau);

// a(tau) = 1 / (1 - e^{-i tau}) - 1 / (i tau), a(0) = 1/2.
KernelValue kernel_a(double tau);

// F(tau) = e^{U(tau) + V(tau)} - 1.
KernelValue kernel_F(double tau);

// G(tau) = F(tau) / tau, G(0) = F'(0).
KernelValue kernel_G(double tau);

// Explicit part of W*_n: a(tau) (1 + F(tau)) e^{i n tau} / n.
KernelValue kernel_Wstar(std::int64_t n, double tau);

// F'(0) = U'(0) + V'(0) = i log 2 - i/2.
ComplexVal kernel_G0();

KernelValue evaluate_kernel(Kernel k, std::optional<std::int64_t> n, double tau);

// |phi_n(tau) / rho0_hat(n tau) - 1 - F(tau) - a(tau)(1 + F(tau)) e^{i n tau} / n|.
// Throws NumericalError when |rho0_hat(n tau)| < 1e-250.
double residual_26(std::int64_t n, double tau);

}  // namespace dickman
