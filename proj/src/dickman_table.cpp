#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dickman/special_fn.hpp"

namespace dickman {
namespace {

constexpr int kStencil = 10;  // degree-9 interpolant for panel integrals
constexpr int kPanelGauss = 8;

// Lagrange basis weights for a 10-node stencil, tabulated for every panel
// position inside the stencil and every Gauss point of that panel.
struct PanelWeights {
  // [panel position 0..8][gauss point][stencil node]
  std::array<std::array<std::array<double, kStencil>, kPanelGauss>, kStencil - 1> w{};
  std::array<double, kPanelGauss> gauss_w{};
  std::array<double, kPanelGauss> gauss_x{};  // in [0, 1]

  PanelWeights() {
    const GaussRule rule = gauss_legendre(kPanelGauss);
    for (int g = 0; g < kPanelGauss; ++g) {
      gauss_x[g] = 0.5 * (rule.nodes[g] + 1.0);
      gauss_w[g] = 0.5 * rule.weights[g];
    }
    for (int pos = 0; pos < kStencil - 1; ++pos) {
      for (int g = 0; g < kPanelGauss; ++g) {
        const double xi = pos + gauss_x[g];
        for (int j = 0; j < kStencil; ++j) {
          double l = 1.0;
          for (int m = 0; m < kStencil; ++m) {
            if (m != j) l *= (xi - m) / static_cast<double>(j - m);
          }
          w[pos][g][j] = l;
        }
      }
    }
  }
};

const PanelWeights& panel_weights() {
  static const PanelWeights pw;
  return pw;
}

double cubic(const double* y, double xi) {
  // Nodes at 0, 1, 2, 3.
  const double l0 = -(xi - 1.0) * (xi - 2.0) * (xi - 3.0) / 6.0;
  const double l1 = xi * (xi - 2.0) * (xi - 3.0) / 2.0;
  const double l2 = -xi * (xi - 1.0) * (xi - 3.0) / 2.0;
  const double l3 = xi * (xi - 1.0) * (xi - 2.0) / 6.0;
  return l0 * y[0] + l1 * y[1] + l2 * y[2] + l3 * y[3];
}

}  // namespace

DickmanTable::DickmanTable(DickmanTableOptions options)
    : u_max_(options.u_max),
      steps_(options.steps_per_unit),
      step_(1.0 / options.steps_per_unit),
      target_abs_err_(options.target_abs_err) {
  if (!(u_max_ >= 2.0) || u_max_ != std::floor(u_max_) || u_max_ > 4096.0) {
    throw DomainError("DickmanTable: u_max must be an integer in [2, 4096]");
  }
  if (steps_ < kStencil) {
    throw DomainError("DickmanTable: steps_per_unit must be at least 10");
  }
  const int units = static_cast<int>(u_max_);
  const std::size_t total = static_cast<std::size_t>(units) * steps_;
  nodes_.assign(total + 1, 0.0);
  cumulative_.assign(total + 1, 0.0);

  const PanelWeights& pw = panel_weights();
  const int s = steps_;
  const double h = step_;

  for (int i = 0; i <= s; ++i) {
    nodes_[i] = 1.0;
    cumulative_[i] = i * h;
  }

  auto stencil_start = [s](int panel, int unit) {
    return std::clamp(panel - (kStencil / 2 - 1), unit * s, (unit + 1) * s - (kStencil - 1));
  };

  KahanSum cumulative;
  cumulative += 1.0;
  for (int k = 1; k < units; ++k) {
    // March nodes of [k, k+1] from rho(t - 1) on [k-1, k].
    KahanSum value;
    value += nodes_[k * s];
    for (int i = k * s + 1; i <= (k + 1) * s; ++i) {
      const int panel = i - 1 - s;  // panel of t - 1, from node panel to panel+1
      const int p = stencil_start(panel, k - 1);
      const auto& wp = pw.w[panel - p];
      double acc = 0.0;
      for (int g = 0; g < kPanelGauss; ++g) {
        double r = 0.0;
        for (int j = 0; j < kStencil; ++j) r += wp[g][j] * nodes_[p + j];
        const double t = (i - 1 + pw.gauss_x[g]) * h;
        acc += pw.gauss_w[g] * r / t;
      }
      value += -h * acc;
      nodes_[i] = value.value() < 1e-300 ? 0.0 : value.value();
    }
    // Cumulative integral over [k, k+1] from the same-interval interpolant.
    for (int i = k * s + 1; i <= (k + 1) * s; ++i) {
      const int panel = i - 1;
      const int p = stencil_start(panel, k);
      const auto& wp = pw.w[panel - p];
      double acc = 0.0;
      for (int g = 0; g < kPanelGauss; ++g) {
        double r = 0.0;
        for (int j = 0; j < kStencil; ++j) r += wp[g][j] * nodes_[p + j];
        acc += pw.gauss_w[g] * r;
      }
      cumulative += h * acc;
      cumulative_[i] = cumulative.value();
    }
  }
}

void DickmanTable::check_domain(double u) const {
  if (!std::isfinite(u)) throw DomainError("rho: non-finite argument");
  if (u > u_max_) {
    throw DomainError("rho: argument " + std::to_string(u) + " exceeds table range u_max = " +
                      std::to_string(u_max_));
  }
}

// Cubic through 4 nodes of the unit interval containing u.
double DickmanTable::interpolate(double u) const {
  const int units = static_cast<int>(u_max_);
  const int k = std::min(static_cast<int>(std::floor(u)), units - 1);
  const double x = u * steps_;
  const int i0 = std::min(static_cast<int>(std::floor(x)), (k + 1) * steps_ - 1);
  const int p = std::clamp(i0 - 1, k * steps_, (k + 1) * steps_ - 3);
  return cubic(&nodes_[p], x - p);
}

double DickmanTable::rho(double u) const {
  check_domain(u);
  if (u < 0.0) return 0.0;
  if (u <= 1.0) return 1.0;
  return interpolate(u);
}

double DickmanTable::integral(double u) const {
  check_domain(u);
  if (u <= 0.0) return 0.0;
  if (u <= 1.0) return u;
  const double x = u * steps_;
  const std::size_t i = std::min(static_cast<std::size_t>(std::floor(x)), nodes_.size() - 1);
  const double a = static_cast<double>(i) * step_;
  if (u <= a) return cumulative_[i];
  // The cubic stencil is fixed on [a, u], so 4-point Gauss is exact.
  const GaussRule rule = gauss_legendre(4);
  double acc = 0.0;
  for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
    const double t = a + 0.5 * (u - a) * (rule.nodes[g] + 1.0);
    acc += rule.weights[g] * interpolate(std::max(t, 1.0));
  }
  return cumulative_[i] + 0.5 * (u - a) * acc;
}

const DickmanTable& DickmanTable::standard() {
  static const DickmanTable table{};
  return table;
}

double rho(double u) { return DickmanTable::standard().rho(u); }
double rho0(double u) { return DickmanTable::standard().rho0(u); }
double dickman_cdf(double u) { return DickmanTable::standard().cdf(u); }

}  // namespace dickman
