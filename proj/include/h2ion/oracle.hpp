#pragma once

#include <optional>
#include <span>
#include <vector>

#include "h2ion/geometry.hpp"
#include "h2ion/quantize.hpp"

namespace h2ion {

/// Brute-force shooting for the eta and xi equations with Runge-Kutta-
/// Fehlberg 7(8) stepping. Shares no code with the series solvers.

struct Sample {
  double x = 0.0;
  double value = 0.0;
};

struct ShootingResult {
  double value = 0.0;   // A for the eta problem, E for the xi problem
  double defect = 0.0;  // normalized matching mismatch at `value`
  /// Uniform samples over the whole interval. eta: [-1, 1] scaled to
  /// Y(0) = 1. xi: [1, xi_max] scaled to X(1) = 1.
  std::vector<Sample> samples;
  double step = 0.0;  // largest step of the frozen mesh
  bool extrapolated = false;
  /// |value(h/2) - value(h)| between the two fixed-mesh roots.
  double halving_change = 0.0;
};

struct OracleOptions {
  double delta = 1e-6;     // offset of the Frobenius start from a singular point
  double step_tol = 1e-12;  // per-step absolute and relative error
  int samples = 2001;
};

/// Shooting defect of the eta equation at (E, A): normalized slopes
/// Y'(0)/|(Y, Y')| from the two ends, averaged with the mirror sign.
double angular_shooting_defect(double E, double A, const SystemConfig& cfg,
                               const OracleOptions& opts = {});

/// Ground gerade A(E): scans A downward from max(20, p^2 + 1) to
/// min(-20, p^2/3 - 1) for the first root of the defect, then Richardson-
/// extrapolates roots found on a frozen mesh and on its halving. A hint
/// skips the scan when a nearby root is known. Throws MatchFailed.
ShootingResult oracle_angular(double E, const SystemConfig& cfg,
                              const OracleOptions& opts = {},
                              std::optional<double> hint = std::nullopt);

double oracle_A(double E, const SystemConfig& cfg);

/// Wronskian mismatch at xi_m = min(1 + 1/p, xi_max/2) between the solution
/// regular at xi = 1 and the one decaying at xi_max = max(20, 40/p),
/// normalized by the norms of both (value, slope) pairs.
double radial_shooting_defect(double E, double A, const SystemConfig& cfg,
                              const OracleOptions& opts = {});

/// Samples of the matched xi solution at (E, A); `value` is E.
ShootingResult radial_shooting(double E, double A, const SystemConfig& cfg,
                               const OracleOptions& opts = {});

struct OracleSolution {
  SeparationPair pair;
  ShootingResult angular;
  ShootingResult radial;
};

/// Root in E of the radial defect with A = oracle_A(E), over the same energy
/// window as solve_ground, Richardson-extrapolated across a mesh halving.
OracleSolution oracle_solve_full(const SystemConfig& cfg,
                                 const OracleOptions& opts = {});

SeparationPair oracle_solve(const SystemConfig& cfg);

enum class EquationKind { angular, radial };

/// Max over interior samples of |LHS| of the eta (angular) or xi (radial)
/// equation from 5-point differences, divided by the max over the same
/// points of the sum of the term magnitudes. Samples must be uniformly
/// spaced; throws TooFewSamples below 101.
double ode_residual(EquationKind kind, std::span<const Sample> samples,
                    double E, double A, const SystemConfig& cfg);

}  // namespace h2ion
