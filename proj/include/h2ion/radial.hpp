#pragma once

#include <vector>

#include "h2ion/geometry.hpp"

namespace h2ion {

/// The X(xi) factor as a Jaffe series
///   X(xi) = e^{-p xi} (xi + 1)^sigma sum_n g_n t^n,  t = (xi - 1)/(xi + 1),
/// with p = sqrt(-E R^2 / 2) and sigma = s R / p - 1 (s = +1 attractive,
/// -1 as printed).
struct RadialSolution {
  double p = 0.0;
  double sigma = 0.0;
  std::vector<double> jaffe_coeffs;  // g_0..g_N, g_0 = 1
  std::vector<double> envelope;      // max_{m >= n} |g_m|, bounds the tail
  int N = 0;
  double tail_estimate = 0.0;  // max_{n > N-4} |g_n| t_max^n
  double xi_max = 0.0;         // largest xi the tail estimate covers
  double E = 0.0;
  double A = 0.0;
  double R = 0.0;
};

/// Coefficients of alpha_n g_{n+1} + beta_n g_n + gamma_n g_{n-1} = 0.
struct JaffeRecurrence {
  double p = 0.0;
  double sigma = 0.0;
  double c0 = 0.0;  // A - p^2 + 2 p sigma + sigma

  double alpha(double n) const { return (n + 1.0) * (n + 1.0); }
  double beta(double n) const {
    return c0 - 2.0 * n * n - 2.0 * (2.0 * p - sigma) * n;
  }
  double gamma(double n) const {
    const double a = n - 1.0 - sigma;
    return a * a;
  }
};

/// Throws NonBoundEnergy for E >= 0.
JaffeRecurrence jaffe_recurrence(double E, double A, const SystemConfig& cfg);

/// Minimal-solution coefficients g_0..g_N (N >= 16) from ratios computed by
/// backward recurrence; the starting depth is doubled until the ratios agree
/// to 1e-14.
RadialSolution jaffe_coeffs(double E, double A, const SystemConfig& cfg, int N);

/// jaffe_coeffs with N doubled from 32 until |g_N| t(xi_max)^N <= 1e-15.
RadialSolution solve_radial(double E, double A, const SystemConfig& cfg,
                            double xi_max);

/// Defect of the n = 0 recurrence equation for the minimal solution:
///   F = beta_0 + alpha_0 r_1,  r_1 = g_1/g_0 from the continued fraction
/// evaluated backward from the given depth, normalized by
/// 1 + |beta_0| + |alpha_0 r_1|. Zero exactly when the xi equation has a
/// solution regular at xi = 1 and decaying at infinity; |F| -> 1 at poles.
double radial_residual(double E, double A, const SystemConfig& cfg, int depth);

/// Same with the depth doubled until successive values agree to 1e-15.
double radial_residual(double E, double A, const SystemConfig& cfg);

struct RadialDerivs {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

double eval_X(const RadialSolution& sol, double xi);
RadialDerivs eval_X_derivs(const RadialSolution& sol, double xi);

/// Left-hand side of the xi equation normalized by the sum of its term
/// magnitudes, maximized over the given points.
double radial_series_residual(const RadialSolution& sol, const SystemConfig& cfg,
                              const std::vector<double>& xis);

}  // namespace h2ion
