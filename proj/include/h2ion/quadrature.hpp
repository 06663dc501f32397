#pragma once

#include <vector>

namespace h2ion {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Maps the rule onto [a, b].
  GaussRule mapped(double a, double b) const;
};

/// Newton iteration on P_n with the asymptotic initial guess; nodes are
/// accurate to a few ulp for n up to several hundred.
GaussRule gauss_legendre(int n);

}  // namespace h2ion
