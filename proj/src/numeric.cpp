#include "dickman/numeric.hpp"

#include <vector>

namespace dickman {
namespace {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton iteration on the three-term Legendre recurrence.
Rule build_rule(int order) {
  Rule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-17) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    r.weights[i] = w;
    r.weights[order - 1 - i] = w;
  }
  return r;
}

template <int N>
GaussRule cached() {
  static const Rule rule = build_rule(N);
  return {rule.nodes, rule.weights};
}

}  // namespace

GaussRule gauss_legendre(int order) {
  switch (order) {
    case 4:
      return cached<4>();
    case 8:
      return cached<8>();
    case 16:
      return cached<16>();
    default:
      throw DomainError("gauss_legendre: unsupported order " + std::to_string(order));
  }
}

}  // namespace dickman
