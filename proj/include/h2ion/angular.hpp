#pragma once

#include <optional>
#include <string>
#include <vector>

#include "h2ion/geometry.hpp"

namespace h2ion {

/// The Y(eta) factor as a Legendre series over even degrees.
///
/// coeffs[k] multiplies P_{2k}(eta); coeffs[0] == 1.
struct AngularSolution {
  std::vector<double> coeffs;
  double A = 0.0;  // separation constant
  double E = 0.0;  // electronic energy, hartree
  double R = 0.0;  // bohr
  int L = 0;       // highest Legendre degree kept
  double tail_estimate = 0.0;

  int degree(std::size_t k) const { return static_cast<int>(2 * k); }
};

struct AngularDerivs {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// Ground gerade separation constant for a fixed truncation L (even, >= 8).
///
/// The expansion Y = sum c_l P_l turns the eta equation into a symmetric
/// tridiagonal eigenproblem in the orthonormal Legendre basis. The ground
/// branch is the largest eigenvalue: it is continuously connected to A = 0 at
/// E R^2 = 0 and Sturm-Liouville eigenvalues of the even block never cross.
/// Throws TruncationNotConverged when |c_L|/max|c_l| > 1e-10.
AngularSolution legendre_A(double E, const SystemConfig& cfg, int L);

/// legendre_A with L doubled from 16 until the tail drops below 1e-13;
/// throws TruncationNotConverged past L = 512.
AngularSolution solve_angular(double E, const SystemConfig& cfg);

/// Clenshaw summation of the Legendre series.
double eval_Y(const AngularSolution& sol, double eta);

/// Value and first two derivatives by term-wise differentiation.
AngularDerivs eval_Y_derivs(const AngularSolution& sol, double eta);

/// (1-eta^2) Y'' - 2 eta Y' - (E R^2/2 eta^2 + A) Y, normalized by
/// max_eta |Y| over the supplied points.
double angular_series_residual(const AngularSolution& sol,
                               const std::vector<double>& etas);

// ---------------------------------------------------------------------------
// Two-term exponential ansatz: Y1 = g1(eta) e^{+sqrtA eta},
// Y2 = g2(eta) e^{-sqrtA eta}, with power series g = sum a_k eta^k.

enum class Branch { plus, minus };

struct AnsatzSeries {
  Branch branch = Branch::plus;
  double sqrtA = 0.0;
  std::vector<double> coeffs;  // a_0..a_K, a_0 = 1, a_1 = 0
  /// True when the coefficients have not decayed at |eta| = 1: the largest
  /// |a_k| over the last quarter exceeds 1e-10 of the overall maximum.
  bool diverging = false;
};

/// Power series of g1 (plus) or g2 (minus) at eta = 0 seeded with a_0 = 1,
/// a_1 = 0. Substituting g = sum a_k eta^k into
///   (1-eta^2) g'' + [2s(1-eta^2) - 2 eta] g' - [(A + E R^2/2) eta^2 + 2 s eta] g = 0,
/// s = +-sqrt(A), gives
///   (k+2)(k+1) a_{k+2} = -2s(k+1) a_{k+1} + k(k+1) a_k + 2sk a_{k-1}
///                        + (A + E R^2/2) a_{k-2}.
/// Throws ImaginaryRoot for A < 0.
AnsatzSeries ansatz_series(double E, double A, const SystemConfig& cfg,
                           Branch branch, int K);

/// Value and first two derivatives of a power series at eta.
AngularDerivs eval_power_series(const std::vector<double>& coeffs, double eta);

/// Left-hand side of the g equation for the given branch, normalized by the
/// sum of magnitudes of its three terms.
double ansatz_ode_residual(const AnsatzSeries& series, double E, double A,
                           const SystemConfig& cfg, double eta);

struct TwoTermDecomposition {
  double sqrtA = 0.0;
  std::vector<double> g1_coeffs;
  std::vector<double> g2_coeffs;
  double D1 = 0.0;
  double D2 = 0.0;
  /// max |eta-equation residual| of the assembled function on 33
  /// Chebyshev-spaced points in (0, 1), relative to max|Y_ref|.
  double assembly_residual = 0.0;
  /// |Y'(0+) - Y'(0-)| of the |eta| assembly, relative to max|Y_ref|.
  double eta0_defect = 0.0;
  /// max |Y_fit - Y_ref| / max|Y_ref| over the 201-point fit grid.
  double fit_mismatch = 0.0;
  bool g1_diverging = false;
  bool g2_diverging = false;
  int K = 0;
};

/// Y_fit(eta) = D1 e^{+sqrtA|eta|} g1(|eta|) + D2 e^{-sqrtA|eta|} g2(|eta|).
double eval_two_term(const TwoTermDecomposition& d, double eta);

/// Least-squares fit of the two-term form against Y_ref on a 201-point grid
/// over [0, 1], minimum-norm when the two basis functions coincide (A = 0).
/// The result is rescaled so max|Y_fit| equals max|Y_ref| on [-1, 1].
/// Always returns unless A < 0 (ImaginaryRoot).
TwoTermDecomposition fit_two_term(const AngularSolution& Y_ref,
                                  const SystemConfig& cfg, int K = 1024);

struct TerminationReport {
  bool terminates = false;
  std::optional<int> degree;
  double max_coeff = 0.0;
  double tail_max = 0.0;  // max |a_k| beyond the candidate degree
  std::optional<double> polynomial_residual;
  std::string evidence;
};

/// Looks for a polynomial g1: all a_k with k > d below tol * max|a_k| for
/// some d <= K/2. A candidate is accepted only if the degree-d polynomial
/// satisfies the g1 equation to 1e-10 at 11 points in [-1, 1].
TerminationReport termination_check(double E, double A,
                                    const SystemConfig& cfg, int K,
                                    double tol);

}  // namespace h2ion
