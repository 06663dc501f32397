#pragma once

#include <cmath>
#include <utility>

namespace h2ion::detail {

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Bisection with secant polishing on a sign-changing bracket [a, b].
/// A secant step is taken only while the previous step shrank the bracket by
/// at least half; otherwise the interval is bisected.
template <class F>
RootResult refine_root(F&& f, double a, double b, double fa, double fb,
                       double xtol, int max_iter) {
  RootResult out;
  if (fa == 0.0) return {a, 0.0, 0, true};
  if (fb == 0.0) return {b, 0.0, 0, true};
  double width = std::abs(b - a);
  bool use_secant = true;
  for (int it = 1; it <= max_iter; ++it) {
    double x = 0.5 * (a + b);
    if (use_secant && fb != fa) {
      const double s = b - fb * (b - a) / (fb - fa);
      const double lo = std::min(a, b), hi = std::max(a, b);
      if (s > lo && s < hi) x = s;
    }
    const double fx = f(x);
    out.iterations = it;
    if (fx == 0.0) return {x, 0.0, it, true};
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    const double new_width = std::abs(b - a);
    use_secant = new_width <= 0.5 * width;
    width = new_width;
    // Secant steps converge from one side; probe just past the iterate so the
    // bracket collapses.
    if (use_secant && new_width > xtol) {
      const double guard = 0.5 * xtol;
      const double probe = std::abs(fa) < std::abs(fb)
                               ? a + (b > a ? guard : -guard)
                               : b + (a > b ? guard : -guard);
      const double fp = f(probe);
      if (fp == 0.0) return {probe, 0.0, it, true};
      if ((fp < 0.0) == (fa < 0.0)) {
        a = probe;
        fa = fp;
      } else {
        b = probe;
        fb = fp;
      }
      width = std::abs(b - a);
    }
    if (width <= xtol) {
      out.converged = true;
      break;
    }
  }
  if (std::abs(fa) < std::abs(fb)) {
    out.x = a;
    out.fx = fa;
  } else {
    out.x = b;
    out.fx = fb;
  }
  return out;
}

}  // namespace h2ion::detail
