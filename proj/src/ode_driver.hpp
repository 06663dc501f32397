#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "h2ion/errors.hpp"

namespace h2ion::detail {

using State = std::array<double, 2>;

inline constexpr double kRescaleAbove = 1e150;
inline constexpr long kMaxSteps = 2'000'000;

inline double state_norm(const State& y) { return std::hypot(y[0], y[1]); }

/// Adaptive RKF78 from x0 through each target in turn (targets ordered in
/// the direction of integration). The state is rescaled when it grows past
/// kRescaleAbove; on_rescale(factor) lets the caller rescale anything it has
/// stored. on_point(i, y) fires on reaching targets[i]. When mesh is given,
/// every accepted abscissa (x0 included) is appended to it.
template <class Sys, class OnPoint, class OnRescale>
State integrate_adaptive(const Sys& sys, State y, double x0,
                         const std::vector<double>& targets, double tol,
                         double dt0, OnPoint on_point, OnRescale on_rescale,
                         std::vector<double>* mesh) {
  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(
      tol, tol, odeint::runge_kutta_fehlberg78<State>());
  double x = x0;
  double dt = dt0;
  long steps = 0;
  if (mesh) mesh->push_back(x);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double target = targets[i];
    const double dir = target >= x ? 1.0 : -1.0;
    dt = dir * std::abs(dt);
    while (x != target) {
      if (++steps > kMaxSteps)
        throw ConvergenceFailed("oracle: integrator step limit exceeded");
      double trial = dt;
      const bool clipped = dir * (x + trial - target) >= 0.0;
      if (clipped) trial = target - x;
      const double before = x;
      const auto res = stepper.try_step(sys, y, x, trial);
      if (res == odeint::success) {
        if (clipped) x = target;  // snap exactly
        if (mesh) mesh->push_back(x);
        if (!clipped || std::abs(trial) > std::abs(dt)) dt = trial;
        const double n = state_norm(y);
        if (n > kRescaleAbove) {
          const double f = 1.0 / n;
          y[0] *= f;
          y[1] *= f;
          on_rescale(f);
        }
        if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
          throw ConvergenceFailed("oracle: non-finite state during integration");
      } else {
        dt = trial;
        if (std::abs(dt) < 1e-15 * std::max(1.0, std::abs(before)))
          throw ConvergenceFailed("oracle: integrator step underflow");
      }
    }
    on_point(i, y);
  }
  return y;
}

template <class Sys>
State integrate_adaptive(const Sys& sys, State y, double x0, double x1,
                         double tol, double dt0, std::vector<double>* mesh) {
  return integrate_adaptive(
      sys, y, x0, std::vector<double>{x1}, tol, dt0, [](std::size_t, const State&) {},
      [](double) {}, mesh);
}

/// RKF78 (8th-order solution, no error control) over a frozen mesh, each
/// interval split into `sub` equal steps.
template <class Sys>
State integrate_fixed(const Sys& sys, State y, const std::vector<double>& mesh,
                      int sub) {
  namespace odeint = boost::numeric::odeint;
  odeint::runge_kutta_fehlberg78<State> stepper;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i) {
    const double a = mesh[i];
    const double h = (mesh[i + 1] - a) / sub;
    for (int k = 0; k < sub; ++k) {
      double x = a + k * h;
      stepper.do_step(sys, y, x, h);
    }
    const double n = state_norm(y);
    if (n > kRescaleAbove) {
      y[0] /= n;
      y[1] /= n;
    }
  }
  return y;
}

inline double max_step(const std::vector<double>& mesh) {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < mesh.size(); ++i)
    m = std::max(m, std::abs(mesh[i + 1] - mesh[i]));
  return m;
}

}  // namespace h2ion::detail
