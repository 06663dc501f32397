#include "h2ion/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "h2ion/errors.hpp"
#include "h2ion/quadrature.hpp"

namespace h2ion {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTailLimit = 1e-12;

struct Rule {
  std::vector<double> x, w;
};

Rule eta_rule(int order) {
  const GaussRule g = gauss_legendre(order);
  return {g.nodes, g.weights};
}

Rule xi_rule(double p, double xi_max, int order, double width_p) {
  const GaussRule g = gauss_legendre(order);
  const double width = width_p / p;
  const int panels = std::max(1, static_cast<int>(std::ceil((xi_max - 1.0) / width)));
  Rule r;
  for (int k = 0; k < panels; ++k) {
    const double a = 1.0 + (xi_max - 1.0) * double(k) / panels;
    const double b = 1.0 + (xi_max - 1.0) * double(k + 1) / panels;
    const GaussRule m = g.mapped(a, b);
    r.x.insert(r.x.end(), m.nodes.begin(), m.nodes.end());
    r.w.insert(r.w.end(), m.weights.begin(), m.weights.end());
  }
  return r;
}

// Sum_i w_i f(x_i)^2 x_i^k for k = 0, 2, 4.
std::array<double, 3> even_moments(const Rule& r, const std::vector<double>& f2) {
  std::array<double, 3> m{};
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    const double x2 = r.x[i] * r.x[i];
    m[0] += r.w[i] * f2[i];
    m[1] += r.w[i] * f2[i] * x2;
    m[2] += r.w[i] * f2[i] * x2 * x2;
  }
  return m;
}

struct Moments {
  std::array<double, 3> xi{}, eta{};
};

Moments moments(const WaveFunction& wf, const QuadratureOrders& q) {
  const Rule er = eta_rule(q.eta);
  const Rule xr = xi_rule(wf.radial.p, wf.xi_max, q.xi_panel, q.panel_width_p);
  std::vector<double> y2(er.x.size()), x2(xr.x.size());
  for (std::size_t i = 0; i < er.x.size(); ++i) {
    const double y = eval_Y(wf.angular, er.x[i]);
    y2[i] = y * y;
  }
  for (std::size_t i = 0; i < xr.x.size(); ++i) {
    const double x = eval_X(wf.radial, xr.x[i]);
    x2[i] = x * x;
  }
  return {even_moments(xr, x2), even_moments(er, y2)};
}

// 2 pi a^3 int X^2 Y^2 (xi^2 - eta^2) without the norm factor.
double raw_norm(const Moments& m, double a) {
  return kTwoPi * a * a * a * (m.xi[1] * m.eta[0] - m.xi[0] * m.eta[1]);
}

double prolate_density(const WaveFunction& wf, const ProlatePoint& pt) {
  const double psi = wf.norm * eval_X(wf.radial, pt.xi) * eval_Y(wf.angular, pt.eta);
  return psi * psi;
}

template <class Density>
double density_cartesian(const Density& rho_of, const SystemConfig& cfg, double x,
                         double y, double z) {
  try {
    return rho_of(to_prolate(x, y, z, cfg).point);
  } catch (const NucleusCoincidence&) {
    return rho_of(focus_point(z < 0.0 ? 1 : 2));
  }
}

double symmetric_node(int i, int n, double half_width) {
  return half_width * double(2 * i - (n - 1)) / double(n - 1);
}

}  // namespace

WaveFunction normalize(const RadialSolution& radial, const AngularSolution& angular,
                       const SystemConfig& cfg) {
  cfg.validate();
  if (radial.jaffe_coeffs.empty() || angular.coeffs.empty())
    throw InvalidConfig("normalize: empty series");
  if (radial.E != angular.E || radial.A != angular.A || radial.R != cfg.R ||
      angular.R != cfg.R)
    throw InvalidConfig("normalize: radial and angular factors disagree on (E, A, R)");

  WaveFunction wf;
  wf.angular = angular;
  wf.cfg = cfg;
  wf.pair.E_elec = radial.E;
  wf.pair.A = radial.A;
  wf.pair.R = cfg.R;
  wf.pair.E_total = radial.E + 1.0 / cfg.R;
  wf.pair.convention = cfg.sign_convention;

  const double p = radial.p;
  double span = 40.0 / p;
  for (int attempt = 0;; ++attempt) {
    wf.xi_max = 1.0 + span;
    wf.radial = radial.xi_max >= wf.xi_max ? radial
                                           : solve_radial(radial.E, radial.A, cfg, wf.xi_max);
    wf.norm = 1.0;
    const Moments m = moments(wf, {});
    // X^2 xi^2 decays at least like exp(-2p xi + 2 sigma log xi): bound the
    // tail by its value at xi_max over the local decay rate.
    const double Xe = eval_X(wf.radial, wf.xi_max);
    const double rate = std::max(2.0 * p - 2.0 * std::max(radial.sigma + 1.0, 0.0) / wf.xi_max,
                                 p);
    const double tail = Xe * Xe * wf.xi_max * wf.xi_max / rate;
    wf.tail_bound = tail / m.xi[1];
    if (wf.tail_bound <= kTailLimit) {
      const double I = raw_norm(m, cfg.half_R());
      if (!(I > 0.0) || !std::isfinite(I))
        throw QuadratureNotConverged("normalize: non-positive norm integral");
      wf.norm = 1.0 / std::sqrt(I);
      return wf;
    }
    if (attempt == 3) {
      std::ostringstream msg;
      msg << "normalize: xi tail bound " << wf.tail_bound << " above " << kTailLimit
          << " at xi_max = " << wf.xi_max;
      throw QuadratureNotConverged(msg.str());
    }
    span *= 2.0;
  }
}

WaveFunction make_wavefunction(const SystemConfig& cfg, const SolverOptions& opts) {
  const SeparationPair pair = solve_ground(cfg, opts);
  const AngularSolution ang = solve_angular(pair.E_elec, cfg);
  const double p = cfg.R * std::sqrt(-0.5 * pair.E_elec);
  const RadialSolution rad = solve_radial(pair.E_elec, ang.A, cfg, 1.0 + 40.0 / p);
  WaveFunction wf = normalize(rad, ang, cfg);
  wf.pair = pair;
  return wf;
}

double norm_integral(const WaveFunction& wf, const QuadratureOrders& q) {
  return wf.norm * wf.norm * raw_norm(moments(wf, q), wf.cfg.half_R());
}

double density_at(const WaveFunction& wf, const ProlatePoint& pt) {
  return prolate_density(wf, pt);
}

double density_at(const WaveFunction& wf, double x, double y, double z) {
  return density_cartesian([&](const ProlatePoint& pt) { return prolate_density(wf, pt); },
                           wf.cfg, x, y, z);
}

std::string_view to_string(Plane p) {
  switch (p) {
    case Plane::xz: return "xz";
    case Plane::xy: return "xy";
    case Plane::axis: return "axis";
  }
  return "xz";
}

Plane parse_plane(std::string_view name) {
  if (name == "xz") return Plane::xz;
  if (name == "xy") return Plane::xy;
  if (name == "axis") return Plane::axis;
  throw InvalidConfig("unknown plane '" + std::string(name) + "' (expected xz, xy or axis)");
}

double DensityGrid::u(int i) const {
  return plane == Plane::axis ? 0.0 : symmetric_node(i, dims[0], -origin[0]);
}

double DensityGrid::v(int j) const {
  const double hw = plane == Plane::xy ? -origin[1] : -origin[2];
  return symmetric_node(j, dims[1], hw);
}

DensityGrid density_slice(const WaveFunction& wf, Plane plane, double half_width, int n) {
  if (n < 64) throw InvalidConfig("density_slice: n must be >= 64");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw InvalidConfig("density_slice: half_width must be positive");
  DensityGrid g;
  g.plane = plane;
  g.spacing = 2.0 * half_width / double(n - 1);
  g.meta = {wf.cfg.R, wf.pair.E_elec, wf.pair.E_total, wf.pair.A, wf.cfg.sign_convention,
            SolverOptions{}.energy_tol, wf.norm};
  if (plane == Plane::axis) {
    g.dims = {1, n};
    g.origin = {0.0, 0.0, -half_width};
  } else {
    g.dims = {n, n};
    g.origin = plane == Plane::xz ? std::array<double, 3>{-half_width, 0.0, -half_width}
                                  : std::array<double, 3>{-half_width, -half_width, 0.0};
  }
  g.values.assign(std::size_t(g.dims[0]) * g.dims[1], 0.0);
  const int nu = g.dims[0], nv = g.dims[1];
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nv; ++j) {
    const double v = symmetric_node(j, n, half_width);
    for (int i = 0; i < nu; ++i) {
      const double u = plane == Plane::axis ? 0.0 : symmetric_node(i, n, half_width);
      double rho = 0.0;
      switch (plane) {
        case Plane::xz: rho = density_at(wf, u, 0.0, v); break;
        case Plane::xy: rho = density_at(wf, u, v, 0.0); break;
        case Plane::axis: rho = density_at(wf, 0.0, 0.0, v); break;
      }
      g.values[std::size_t(j) * nu + i] = rho;
    }
  }
  return g;
}

double enclosed_charge(const DensityGrid& grid) {
  if (grid.plane != Plane::xz)
    throw InvalidConfig("enclosed_charge: needs an xz grid");
  const int nx = grid.dims[0], nz = grid.dims[1];
  const double h = grid.spacing;
  double total = 0.0;
  for (int j = 0; j < nz; ++j) {
    const double wz = (j == 0 || j == nz - 1) ? 0.5 : 1.0;
    for (int i = 0; i < nx; ++i) {
      const double wx = (i == 0 || i == nx - 1) ? 0.5 : 1.0;
      total += wx * wz * grid.at(i, j) * std::numbers::pi * std::abs(grid.u(i));
    }
  }
  return total * h * h;
}

std::vector<std::size_t> strict_maxima(const std::vector<double>& v) {
  std::vector<std::size_t> out;
  const std::size_t n = v.size();
  std::size_t i = 1;
  while (i + 1 < n) {
    std::size_t j = i;
    while (j + 1 < n && v[j + 1] == v[i]) ++j;
    if (j + 1 < n && v[i - 1] < v[i] && v[j + 1] < v[j]) out.push_back((i + j) / 2);
    i = j + 1;
  }
  return out;
}

std::pair<double, double> second_moments(const WaveFunction& wf) {
  const Moments m = moments(wf, {});
  const double a = wf.cfg.half_R();
  const double c = wf.norm * wf.norm * kTwoPi * std::pow(a, 5);
  const auto& X = m.xi;
  const auto& Y = m.eta;
  const double z2 = c * (X[2] * Y[1] - X[1] * Y[2]);
  const double perp2 = c * (X[2] * Y[0] - X[2] * Y[1] + X[1] * Y[2] - X[1] * Y[0] +
                            X[0] * Y[1] - X[0] * Y[2]);
  return {z2, 0.5 * perp2};
}

AxisReport axis_report(const WaveFunction& wf, int n) {
  if (n < 1001) throw InvalidConfig("axis_report: n must be >= 1001");
  AxisReport rep;
  const double L = 2.0 * wf.cfg.R + 2.0;
  rep.step = 2.0 * L / double(n - 1);
  rep.z.resize(n);
  rep.rho.resize(n);
  for (int i = 0; i < n; ++i) {
    rep.z[i] = symmetric_node(i, n, L);
    rep.rho[i] = density_at(wf, 0.0, 0.0, rep.z[i]);
  }
  for (std::size_t k : strict_maxima(rep.rho)) rep.maxima.push_back(rep.z[k]);
  std::tie(rep.z2, rep.x2) = second_moments(wf);
  rep.anisotropy = (rep.z2 - rep.x2) / (rep.z2 + rep.x2);
  return rep;
}

namespace {

struct Directions {
  std::vector<std::array<double, 3>> unit;
  std::vector<double> weight;  // sums to 1
};

Directions sphere_directions(int n_theta, int n_phi) {
  const GaussRule g = gauss_legendre(n_theta);
  Directions d;
  for (int a = 0; a < n_theta; ++a) {
    const double c = g.nodes[a];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    for (int b = 0; b < n_phi; ++b) {
      const double phi = kTwoPi * (b + 0.5) / n_phi;
      d.unit.push_back({s * std::cos(phi), s * std::sin(phi), c});
      d.weight.push_back(0.5 * g.weights[a] / n_phi);
    }
  }
  return d;
}

}  // namespace

CuspResult cusp_diagnostic(const WaveFunction& wf, int nucleus,
                           const std::vector<double>& radii) {
  if (nucleus != 1 && nucleus != 2) throw InvalidConfig("cusp_diagnostic: nucleus must be 1 or 2");
  if (radii.size() < 4) throw RadiiOutOfRange("cusp_diagnostic: need at least 4 radii");
  for (double r : radii)
    if (!(r >= 1e-4 && r <= 1e-2))
      throw RadiiOutOfRange("cusp_diagnostic: radii must lie in [1e-4, 1e-2]");

  const Directions dirs = sphere_directions(16, 8);
  const double zc = nucleus == 1 ? -wf.cfg.half_R() : wf.cfg.half_R();
  CuspResult res;
  res.nucleus = nucleus;
  res.radii = radii;
  res.directions = static_cast<int>(dirs.unit.size());
  for (double r : radii) {
    double avg = 0.0;
    for (std::size_t k = 0; k < dirs.unit.size(); ++k) {
      const auto& u = dirs.unit[k];
      avg += dirs.weight[k] * density_at(wf, r * u[0], r * u[1], zc + r * u[2]);
    }
    res.averages.push_back(avg);
  }

  // log(avg) = c0 + c1 r + c2 r^2 with r in units of the largest radius.
  const double rs = *std::max_element(radii.begin(), radii.end());
  Eigen::MatrixXd M(radii.size(), 3);
  Eigen::VectorXd b(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double t = radii[i] / rs;
    M(i, 0) = 1.0;
    M(i, 1) = t;
    M(i, 2) = t * t;
    b(i) = std::log(res.averages[i]);
  }
  const Eigen::Vector3d c = M.colPivHouseholderQr().solve(b);
  res.rho0 = std::exp(c(0));
  res.kappa = 0.5 * c(1) / rs;
  res.fit_rms = std::sqrt((M * c - b).squaredNorm() / double(radii.size()));
  return res;
}

double sphere_variation(const WaveFunction& wf, double radius) {
  const Directions dirs = sphere_directions(16, 16);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& u : dirs.unit) {
    const double rho = density_at(wf, radius * u[0], radius * u[1], radius * u[2]);
    lo = std::min(lo, rho);
    hi = std::max(hi, rho);
  }
  for (double s : {-1.0, 1.0}) {  // poles
    const double rho = density_at(wf, 0.0, 0.0, s * radius);
    lo = std::min(lo, rho);
    hi = std::max(hi, rho);
  }
  return (hi - lo) / hi;
}

AmplitudeTable term_amplitudes(const std::vector<double>& R_values, const SystemConfig& tmpl) {
  AmplitudeTable table;
  for (double R : R_values) {
    AmplitudeRow row;
    row.R = R;
    try {
      SystemConfig cfg = tmpl;
      cfg.R = R;
      cfg.validate();
      row.pair = solve_ground(cfg);
      const AngularSolution ang = solve_angular(row.pair->E_elec, cfg);
      row.fit = fit_two_term(ang, cfg);
      row.ratio = row.fit->D1 != 0.0 ? std::abs(row.fit->D2 / row.fit->D1)
                                     : std::numeric_limits<double>::quiet_NaN();
    } catch (const Error& e) {
      row.flag = e.kind();
      row.ratio = std::numeric_limits<double>::quiet_NaN();
    }
    table.rows.push_back(std::move(row));
  }

  std::vector<std::pair<double, double>> pts;
  for (const auto& r : table.rows)
    if (std::isfinite(r.ratio)) pts.emplace_back(r.R, r.ratio);
  std::sort(pts.begin(), pts.end());
  bool inc = pts.size() >= 2, dec = pts.size() >= 2;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    inc = inc && pts[i].second > pts[i - 1].second;
    dec = dec && pts[i].second < pts[i - 1].second;
  }
  table.ratio_trend = inc ? "increasing" : (dec ? "decreasing" : "none");
  table.ratio_monotone = inc || dec;
  return table;
}

MonteCarloCheck monte_carlo_norm(const WaveFunction& wf, std::uint64_t samples,
                                 std::uint64_t seed) {
  if (samples < 2) throw InvalidConfig("monte_carlo_norm: need at least 2 samples");
  std::mt19937_64 rng(seed);
  const double p = wf.radial.p;
  std::exponential_distribution<double> dxi(2.0 * p);
  std::uniform_real_distribution<double> deta(-1.0, 1.0);
  const double a = wf.cfg.half_R();
  const double a3 = a * a * a;
  // Welford accumulation of 2 pi f / pdf(xi, eta), pdf = 2p e^{-2p(xi-1)} / 2.
  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t k = 1; k <= samples; ++k) {
    const double s = dxi(rng);
    const double xi = 1.0 + s;
    const double eta = deta(rng);
    double val = 0.0;
    if (xi <= wf.xi_max) {
      const double psi = wf.norm * eval_X(wf.radial, xi) * eval_Y(wf.angular, eta);
      const double f = psi * psi * a3 * (xi * xi - eta * eta);
      val = kTwoPi * f / (p * std::exp(-2.0 * p * s));
    }
    const double delta = val - mean;
    mean += delta / double(k);
    m2 += delta * (val - mean);
  }
  MonteCarloCheck out;
  out.samples = samples;
  out.seed = seed;
  out.mean = mean;
  out.standard_error = std::sqrt(m2 / double(samples - 1) / double(samples));
  out.deviation_sigmas = std::abs(mean - 1.0) / out.standard_error;
  return out;
}

namespace {

// Lagrange interpolation through the 8 uniform samples nearest to x.
double interpolate(const std::vector<Sample>& s, double x) {
  constexpr int kPoints = 8;
  const int n = static_cast<int>(s.size());
  const double x0 = s.front().x, h = s[1].x - s[0].x;
  if (x <= x0) return s.front().value;
  if (x >= s.back().x) return s.back().value;
  const int k = static_cast<int>(std::floor((x - x0) / h));
  const int first = std::clamp(k - kPoints / 2 + 1, 0, n - kPoints);
  double sum = 0.0;
  for (int i = first; i < first + kPoints; ++i) {
    double l = 1.0;
    for (int j = first; j < first + kPoints; ++j)
      if (j != i) l *= (x - s[j].x) / (s[i].x - s[j].x);
    sum += l * s[i].value;
  }
  return sum;
}

// Composite Simpson of f^2 x^k, k = 0, 2.
std::array<double, 2> simpson_moments(const std::vector<Sample>& s) {
  const std::size_t n = s.size();
  const double h = s[1].x - s[0].x;
  std::array<double, 2> m{};
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double f2 = s[i].value * s[i].value;
    m[0] += w * f2;
    m[1] += w * f2 * s[i].x * s[i].x;
  }
  m[0] *= h / 3.0;
  m[1] *= h / 3.0;
  return m;
}

}  // namespace

SampledWaveFunction sampled_wavefunction(const OracleSolution& sol, const SystemConfig& cfg) {
  SampledWaveFunction wf;
  wf.cfg = cfg;
  wf.X = sol.radial.samples;
  wf.Y = sol.angular.samples;
  if (wf.X.size() < 9 || wf.Y.size() < 9 || wf.X.size() % 2 == 0 || wf.Y.size() % 2 == 0)
    throw InvalidConfig("sampled_wavefunction: need an odd number (>= 9) of samples");
  const auto mx = simpson_moments(wf.X);
  const auto my = simpson_moments(wf.Y);
  const double a = cfg.half_R();
  const double I = kTwoPi * a * a * a * (mx[1] * my[0] - mx[0] * my[1]);
  wf.norm = 1.0 / std::sqrt(I);
  return wf;
}

double density_at(const SampledWaveFunction& wf, double x, double y, double z) {
  return density_cartesian(
      [&](const ProlatePoint& pt) {
        const double psi = wf.norm * interpolate(wf.X, pt.xi) * interpolate(wf.Y, pt.eta);
        return psi * psi;
      },
      wf.cfg, x, y, z);
}

}  // namespace h2ion
