#pragma once

#include <span>
#include <vector>

#include "dickman/numeric.hpp"

namespace dickman {

using ComplexVal = Complex;

struct DickmanTableOptions {
  double u_max = 64.0;
  int steps_per_unit = 1024;
  double target_abs_err = 1e-10;
};

// Dickman's function on a uniform grid over [0, u_max].
//
// Nodes are produced by marching unit interval by unit interval:
//   rho(u_i) = rho(u_{i-1}) - \int_{u_{i-1}}^{u_i} rho(t - 1) / t dt,
// with rho(t - 1) taken from a degree-9 interpolant of the previous unit
// interval and the panel integral done by 8-point Gauss-Legendre. Values
// between nodes use cubic interpolation that never straddles an integer
// (rho' jumps at u = 1 and rho'' at u = 2).
//
// Immutable after construction.
class DickmanTable {
 public:
  explicit DickmanTable(DickmanTableOptions options = {});

  // rho(u); 0 for u < 0; throws DomainError for u > u_max or non-finite u.
  double rho(double u) const;
  double rho0(double u) const { return kExpMinusGamma * rho(u); }

  // \int_0^u rho(t) dt (0 for u <= 0).
  double integral(double u) const;
  // \int_0^u rho0(t) dt.
  double cdf(double u) const { return kExpMinusGamma * integral(u); }

  double u_max() const noexcept { return u_max_; }
  double step() const noexcept { return step_; }
  int steps_per_unit() const noexcept { return steps_; }
  double target_abs_err() const noexcept { return target_abs_err_; }
  std::span<const double> nodes() const noexcept { return nodes_; }

  // Shared default table (u_max = 64, step 2^-10), built on first use.
  static const DickmanTable& standard();

 private:
  void check_domain(double u) const;
  double interpolate(double u) const;

  double u_max_;
  int steps_;
  double step_;
  double target_abs_err_;
  std::vector<double> nodes_;
  std::vector<double> cumulative_;  // \int_0^{u_i} rho
};

double rho(double u);
double rho0(double u);
double dickman_cdf(double u);

// I(i tau) = \int_0^1 (e^{i tau v} - 1) dv / v
//          = Ci(|tau|) - gamma - log|tau| + i Si(tau).
ComplexVal int_I(double tau);

// Fourier transform of rho0: exp(I(i tau)).
ComplexVal rho0_hat(double tau);

double sine_integral(double x);
// x > 0.
double cosine_integral(double x);

// Cl_2(theta) = sum_{k >= 1} sin(k theta) / k^2.
double clausen2(double theta);
// Li_2(e^{i theta}) and Li_3(e^{i theta}).
ComplexVal dilog_unit(double theta);
ComplexVal trilog_unit(double theta);

}  // namespace dickman
