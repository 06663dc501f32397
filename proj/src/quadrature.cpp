#include "h2ion/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "h2ion/errors.hpp"

namespace h2ion {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw InvalidConfig("Gauss-Legendre order must be >= 1");
  GaussRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

GaussRule GaussRule::mapped(double a, double b) const {
  GaussRule out;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  out.nodes.reserve(nodes.size());
  out.weights.reserve(weights.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out.nodes.push_back(mid + half * nodes[i]);
    out.weights.push_back(half * weights[i]);
  }
  return out;
}

}  // namespace h2ion
