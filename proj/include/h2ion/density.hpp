#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "h2ion/angular.hpp"
#include "h2ion/geometry.hpp"
#include "h2ion/oracle.hpp"
#include "h2ion/quantize.hpp"
#include "h2ion/radial.hpp"

namespace h2ion {

/// Psi = norm * X(xi) Y(eta), normalized over all space.
struct WaveFunction {
  RadialSolution radial;
  AngularSolution angular;
  SeparationPair pair;
  SystemConfig cfg;
  double norm = 1.0;
  double xi_max = 0.0;       // upper end of the xi quadrature
  double tail_bound = 0.0;   // relative xi-tail contribution beyond xi_max
};

struct QuadratureOrders {
  int eta = 64;         // Gauss-Legendre order on [-1, 1]
  int xi_panel = 32;    // Gauss-Legendre order per xi panel
  double panel_width_p = 1.0;  // panel width in units of 1/p
};

/// Builds the normalized wavefunction from converged factors for the same
/// (E, A, R). The xi range grows from 1 + 40/p until the tail bound is
/// below 1e-12; throws QuadratureNotConverged otherwise.
WaveFunction normalize(const RadialSolution& radial, const AngularSolution& angular,
                       const SystemConfig& cfg);

/// solve_ground, both series at the root, normalize.
WaveFunction make_wavefunction(const SystemConfig& cfg, const SolverOptions& opts = {});

/// Re-quadrature of int |Psi|^2 dV with the stored norm.
double norm_integral(const WaveFunction& wf, const QuadratureOrders& q = {});

/// |Psi|^2 in bohr^-3. Points on a nucleus use the focal point.
double density_at(const WaveFunction& wf, double x, double y, double z);
double density_at(const WaveFunction& wf, const ProlatePoint& pt);

enum class Plane { xz, xy, axis };

std::string_view to_string(Plane p);
Plane parse_plane(std::string_view name);

struct GridMeta {
  double R = 0.0;
  double E_elec = 0.0;
  double E_total = 0.0;
  double A = 0.0;
  SignConvention convention = SignConvention::attractive;
  double energy_tol = 0.0;
  double norm = 0.0;
};

/// Values are row-major: the first in-plane axis (x) varies fastest.
/// For xz the second axis is z, for xy it is y.
struct DensityGrid {
  Plane plane = Plane::xz;
  std::array<double, 3> origin{};  // coordinates of values[0]
  double spacing = 0.0;
  std::array<int, 2> dims{};
  std::vector<double> values;
  GridMeta meta;

  double at(int i, int j) const { return values[std::size_t(j) * dims[0] + i]; }
  /// In-plane coordinates (first axis, second axis) of node (i, j).
  double u(int i) const;
  double v(int j) const;
};

/// Square grid centered on the bond midpoint, n >= 64 points per axis.
DensityGrid density_slice(const WaveFunction& wf, Plane plane, double half_width, int n);

/// Charge inside the xz grid's domain of revolution: trapezoid in x and z
/// with the azimuth restored by the axial symmetry, averaged over both
/// half-planes.
double enclosed_charge(const DensityGrid& grid);

struct AxisReport {
  std::vector<double> z;
  std::vector<double> rho;
  std::vector<double> maxima;  // z positions of strict local maxima
  double step = 0.0;
  double anisotropy = 0.0;     // (<z^2> - <x^2>) / (<z^2> + <x^2>)
  double z2 = 0.0;
  double x2 = 0.0;
};

/// Profile over z in [-2R-2, 2R+2] with n >= 1001 points.
AxisReport axis_report(const WaveFunction& wf, int n = 2001);

/// Indices of strict local maxima; runs of equal values count once, at the
/// middle of the run. End points are never maxima.
std::vector<std::size_t> strict_maxima(const std::vector<double>& values);

/// <z^2> and <x^2> by product quadrature.
std::pair<double, double> second_moments(const WaveFunction& wf);

struct CuspResult {
  int nucleus = 1;
  std::vector<double> radii;
  std::vector<double> averages;  // spherical averages of rho
  double rho0 = 0.0;             // extrapolated rho(0)
  double kappa = 0.0;            // rho'(0) / (2 rho(0))
  double fit_rms = 0.0;          // rms residual of the log fit
  int directions = 0;
};

inline const std::vector<double> kDefaultCuspRadii{1e-4, 2e-4, 3e-4, 4e-4, 6e-4, 8e-4};

/// Averages rho over spheres around the nucleus (Gauss-Legendre in cos(theta)
/// times uniform phi) and fits log(rho_avg) = a + b r + c r^2; kappa = b/2.
/// Radii must lie in [1e-4, 1e-2], at least 4 of them.
CuspResult cusp_diagnostic(const WaveFunction& wf, int nucleus,
                           const std::vector<double>& radii = kDefaultCuspRadii);

/// (max - min)/max of rho over a sphere of the given radius about the bond
/// midpoint.
double sphere_variation(const WaveFunction& wf, double radius);

struct AmplitudeRow {
  double R = 0.0;
  std::optional<SeparationPair> pair;
  std::optional<TwoTermDecomposition> fit;
  double ratio = 0.0;  // |D2/D1|, NaN when D1 = 0
  std::string flag;    // error kind when the row could not be computed
};

struct AmplitudeTable {
  std::vector<AmplitudeRow> rows;
  bool ratio_monotone = false;
  /// "increasing", "decreasing" or "none", with R ascending.
  std::string ratio_trend;
};

AmplitudeTable term_amplitudes(const std::vector<double>& R_values,
                               const SystemConfig& tmpl);

struct MonteCarloCheck {
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  double deviation_sigmas = 0.0;  // |mean - 1| / standard_error
};

/// Importance-sampled int |Psi|^2 dV: xi - 1 ~ Exp(2p), eta and phi uniform,
/// mt19937_64 with a fixed seed.
MonteCarloCheck monte_carlo_norm(const WaveFunction& wf, std::uint64_t samples,
                                 std::uint64_t seed = 20240611);

/// Wavefunction built only from the shooting oracle's samples, with local
/// Lagrange interpolation between them.
struct SampledWaveFunction {
  SystemConfig cfg;
  std::vector<Sample> X;  // uniform in xi from 1
  std::vector<Sample> Y;  // uniform in eta over [-1, 1]
  double norm = 1.0;
};

SampledWaveFunction sampled_wavefunction(const OracleSolution& sol, const SystemConfig& cfg);
double density_at(const SampledWaveFunction& wf, double x, double y, double z);

}  // namespace h2ion
