#include "h2ion/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "h2ion/errors.hpp"
#include "ode_driver.hpp"
#include "root_refine.hpp"

namespace h2ion {

namespace {

using detail::State;

constexpr int kRootIterations = 200;

// (1 - eta^2) Y'' - 2 eta Y' - (q eta^2 + A) Y = 0,  q = E R^2 / 2.
struct EtaSystem {
  double q, A;
  void operator()(const State& y, State& dy, double eta) const {
    dy[0] = y[1];
    dy[1] = (2.0 * eta * y[1] + (q * eta * eta + A) * y[0]) / (1.0 - eta * eta);
  }
};

// (xi^2 - 1) X'' + 2 xi X' + (q xi^2 + 2 s R xi + A) X = 0.
struct XiSystem {
  double q, sR, A;
  void operator()(const State& y, State& dy, double xi) const {
    dy[0] = y[1];
    dy[1] = -(2.0 * xi * y[1] + (q * xi * xi + 2.0 * sR * xi + A) * y[0]) /
            (xi * xi - 1.0);
  }
};

double eta_q(double E, const SystemConfig& cfg) { return 0.5 * E * cfg.R * cfg.R; }

// Regular solution near eta = +1 (side = +1) or -1 (side = -1), u = 1 -+ eta:
// 2(k+1)^2 c_{k+1} = [k(k+1) - w0] c_k - w1 c_{k-1} - w2 c_{k-2},
// w0 = -q - A, w1 = 2q, w2 = -q.
State eta_start(double q, double A, double delta, double side) {
  const double w0 = -q - A, w1 = 2.0 * q;
  const double c1 = -w0 / 2.0;
  const double c2 = ((2.0 - w0) * c1 - w1) / 8.0;
  const double Y = 1.0 + c1 * delta + c2 * delta * delta;
  const double dYdu = c1 + 2.0 * c2 * delta;
  return {Y, -side * dYdu};
}

// Regular solution near xi = 1, x = xi - 1:
// 2(k+1)^2 c_{k+1} = -([k(k+1) + v0] c_k + v1 c_{k-1} + v2 c_{k-2}),
// v0 = q + 2sR + A, v1 = 2q + 2sR, v2 = q.
State xi_start(double q, double sR, double A, double delta) {
  const double v0 = q + 2.0 * sR + A, v1 = 2.0 * q + 2.0 * sR;
  const double c1 = -v0 / 2.0;
  const double c2 = -((2.0 + v0) * c1 + v1) / 8.0;
  return {1.0 + c1 * delta + c2 * delta * delta, c1 + 2.0 * c2 * delta};
}

double slope_angle(const State& y) { return y[1] / detail::state_norm(y); }

// Gerade matching condition from the two half-intervals.
double eta_defect_from(const State& right, const State& left) {
  return 0.5 * (slope_angle(right) - slope_angle(left));
}

double angular_defect_impl(double E, double A, const SystemConfig& cfg,
                           const OracleOptions& opts,
                           std::vector<double>* mesh_right) {
  const double q = eta_q(E, cfg);
  const EtaSystem sys{q, A};
  const double d = opts.delta;
  const State r = detail::integrate_adaptive(sys, eta_start(q, A, d, 1.0), 1.0 - d,
                                             0.0, opts.step_tol, -d, mesh_right);
  const State l = detail::integrate_adaptive(sys, eta_start(q, A, d, -1.0),
                                             -1.0 + d, 0.0, opts.step_tol, d, nullptr);
  return eta_defect_from(r, l);
}

double angular_defect_fixed(double E, double A, const SystemConfig& cfg,
                            const OracleOptions& opts,
                            const std::vector<double>& mesh_right, int sub) {
  const double q = eta_q(E, cfg);
  const EtaSystem sys{q, A};
  std::vector<double> mesh_left(mesh_right.size());
  std::transform(mesh_right.begin(), mesh_right.end(), mesh_left.begin(),
                 [](double x) { return -x; });
  const State r = detail::integrate_fixed(sys, eta_start(q, A, opts.delta, 1.0),
                                          mesh_right, sub);
  const State l = detail::integrate_fixed(sys, eta_start(q, A, opts.delta, -1.0),
                                          mesh_left, sub);
  return eta_defect_from(r, l);
}

struct Bracket {
  double a, b, fa, fb;
};

// Expands symmetrically around center until f changes sign; the sign change
// nearest to center wins.
std::optional<Bracket> bracket_near(const std::function<double(double)>& f,
                                    double center, double w0, double w_max) {
  const double fc = f(center);
  if (fc == 0.0) return Bracket{center, center, 0.0, 0.0};
  for (double w = w0; w <= w_max; w *= 4.0) {
    const double hi = center + w, lo = center - w;
    const double fh = f(hi);
    if ((fh < 0.0) != (fc < 0.0)) return Bracket{center, hi, fc, fh};
    const double fl = f(lo);
    if ((fl < 0.0) != (fc < 0.0)) return Bracket{lo, center, fl, fc};
  }
  return std::nullopt;
}

double refine(const std::function<double(double)>& f, const Bracket& br,
              double tol) {
  if (br.a == br.b) return br.a;
  const detail::RootResult r =
      detail::refine_root(f, br.a, br.b, br.fa, br.fb, tol, kRootIterations);
  if (!r.converged) throw ConvergenceFailed("oracle: root refinement did not converge");
  return r.x;
}

double a_tolerance(double A) { return 1e-14 * std::max(1.0, std::abs(A)); }

// Adaptive-mesh root for the ground A at energy E.
double angular_root_adaptive(double E, const SystemConfig& cfg,
                             const OracleOptions& opts,
                             std::optional<double> hint) {
  const double p2 = -eta_q(E, cfg);
  const auto f = [&](double A) { return angular_defect_impl(E, A, cfg, opts, nullptr); };
  const double p = std::sqrt(std::max(p2, 0.0));
  if (hint) {
    if (auto br = bracket_near(f, *hint, 1e-4 * std::max(1.0, std::abs(*hint)),
                               0.5 * std::max(1.0, p)))
      return refine(f, *br, a_tolerance(*hint));
  }
  const double A_hi = std::max(20.0, p2 + 1.0);
  const double A_lo = std::min(-20.0, p2 / 3.0 - 1.0);
  const double step = 0.25 * std::max(1.0, p);
  double a_prev = A_hi, f_prev = f(A_hi);
  for (double A = A_hi - step;; A -= step) {
    if (A < A_lo) A = A_lo;
    const double fa = f(A);
    if (f_prev == 0.0) return a_prev;
    if ((fa < 0.0) != (f_prev < 0.0))
      return refine(f, {A, a_prev, fa, f_prev}, a_tolerance(A));
    if (A <= A_lo) break;
    a_prev = A;
    f_prev = fa;
  }
  std::ostringstream msg;
  msg << "oracle_A: no matching root for A in [" << A_lo << ", " << A_hi
      << "] at E = " << E;
  throw MatchFailed(msg.str());
}

double angular_root_fixed(double E, const SystemConfig& cfg, const OracleOptions& opts,
                          const std::vector<double>& mesh, int sub, double near) {
  const auto f = [&](double A) {
    return angular_defect_fixed(E, A, cfg, opts, mesh, sub);
  };
  const auto br = bracket_near(f, near, 1e-9 * std::max(1.0, std::abs(near)),
                               1e-2 * std::max(1.0, std::abs(near)));
  if (!br) throw MatchFailed("oracle_A: fixed-mesh root not bracketed");
  return refine(f, *br, a_tolerance(near));
}

struct RadialGeometry {
  double xi_max, xi_m;
};

RadialGeometry radial_geometry(double p) {
  const double xi_max = std::max(20.0, 40.0 / p);
  return {xi_max, std::min(1.0 + 1.0 / p, 0.5 * xi_max)};
}

struct RadialMeshes {
  std::vector<double> out, in;
};

State xi_inward_start(double p, double sigma, double xi_max) {
  return {1.0, -p + sigma / xi_max};
}

double wronskian_defect(const State& o, const State& i) {
  return (o[0] * i[1] - o[1] * i[0]) / (detail::state_norm(o) * detail::state_norm(i));
}

struct XiParams {
  double q, p, sigma, sR;
};

XiParams xi_params(double E, const SystemConfig& cfg) {
  if (!(E < 0.0)) throw NonBoundEnergy("oracle: E must be negative");
  XiParams x;
  x.q = eta_q(E, cfg);
  x.p = std::sqrt(-x.q);
  x.sR = cfg.sign() * cfg.R;
  x.sigma = x.sR / x.p - 1.0;
  return x;
}

double radial_defect_adaptive(double E, double A, const SystemConfig& cfg,
                              const OracleOptions& opts, const RadialGeometry& g,
                              RadialMeshes* meshes) {
  const XiParams xp = xi_params(E, cfg);
  const XiSystem sys{xp.q, xp.sR, A};
  const double d = opts.delta;
  const State o = detail::integrate_adaptive(sys, xi_start(xp.q, xp.sR, A, d), 1.0 + d,
                                             g.xi_m, opts.step_tol, d,
                                             meshes ? &meshes->out : nullptr);
  const State i = detail::integrate_adaptive(
      sys, xi_inward_start(xp.p, xp.sigma, g.xi_max), g.xi_max, g.xi_m,
      opts.step_tol, -1e-3, meshes ? &meshes->in : nullptr);
  return wronskian_defect(o, i);
}

double radial_defect_fixed(double E, double A, const SystemConfig& cfg,
                           const OracleOptions& opts, const RadialGeometry& g,
                           const RadialMeshes& meshes, int sub) {
  const XiParams xp = xi_params(E, cfg);
  const XiSystem sys{xp.q, xp.sR, A};
  const State o =
      detail::integrate_fixed(sys, xi_start(xp.q, xp.sR, A, opts.delta), meshes.out, sub);
  const State i = detail::integrate_fixed(
      sys, xi_inward_start(xp.p, xp.sigma, g.xi_max), meshes.in, sub);
  return wronskian_defect(o, i);
}

void check_samples(int n) {
  if (n < 101 || n % 2 == 0)
    throw InvalidConfig("oracle: sample count must be odd and >= 101");
}

std::vector<Sample> angular_samples(double E, double A, const SystemConfig& cfg,
                                    const OracleOptions& opts) {
  check_samples(opts.samples);
  const int n = opts.samples;
  const int mid = (n - 1) / 2;
  const double q = eta_q(E, cfg);
  const EtaSystem sys{q, A};
  std::vector<Sample> out(n);
  for (int j = 0; j < n; ++j) out[j].x = double(2 * j - (n - 1)) / double(n - 1);

  const auto run_side = [&](double side) {
    // Targets from the end nearest the singular point towards eta = 0.
    std::vector<double> targets;
    std::vector<int> index;
    if (side > 0)
      for (int j = n - 2; j >= mid; --j) targets.push_back(out[j].x), index.push_back(j);
    else
      for (int j = 1; j <= mid; ++j) targets.push_back(out[j].x), index.push_back(j);
    std::vector<double> values(targets.size());
    double scale = 1.0;
    const double x0 = side * (1.0 - opts.delta);
    detail::integrate_adaptive(
        sys, eta_start(q, A, opts.delta, side), x0, targets, opts.step_tol,
        -side * opts.delta,
        [&](std::size_t k, const State& y) { values[k] = y[0]; },
        [&](double f) {
          scale *= f;
          for (double& v : values) v *= f;
        },
        nullptr);
    const double y0 = values.back();  // value at eta = 0
    for (std::size_t k = 0; k < targets.size(); ++k)
      out[index[k]].value = values[k] / y0;
    out[side > 0 ? n - 1 : 0].value = scale / y0;  // Y(+-1) = c_0 = 1
  };
  run_side(-1.0);
  run_side(1.0);
  return out;
}

std::vector<Sample> radial_samples(double E, double A, const SystemConfig& cfg,
                                   const OracleOptions& opts, const RadialGeometry& g) {
  check_samples(opts.samples);
  const int n = opts.samples;
  const XiParams xp = xi_params(E, cfg);
  const XiSystem sys{xp.q, xp.sR, A};
  std::vector<Sample> out(n);
  for (int j = 0; j < n; ++j)
    out[j].x = 1.0 + (g.xi_max - 1.0) * double(j) / double(n - 1);
  out[0].value = 1.0;
  out[n - 1].x = g.xi_max;

  std::vector<double> t_out, t_in;
  std::vector<int> i_out, i_in;
  for (int j = 1; j < n - 1; ++j) {
    if (out[j].x <= g.xi_m) t_out.push_back(out[j].x), i_out.push_back(j);
  }
  for (int j = n - 2; j >= 1; --j) {
    if (out[j].x > g.xi_m) t_in.push_back(out[j].x), i_in.push_back(j);
  }
  t_out.push_back(g.xi_m);
  t_in.push_back(g.xi_m);

  std::vector<double> v_out(t_out.size()), v_in(t_in.size());
  double in_end_scale = 1.0;  // factor applied to X(xi_max) = 1 by rescaling
  const double d = opts.delta;
  detail::integrate_adaptive(
      sys, xi_start(xp.q, xp.sR, A, d), 1.0 + d, t_out, opts.step_tol, d,
      [&](std::size_t k, const State& y) { v_out[k] = y[0]; },
      [&](double f) {
        for (double& v : v_out) v *= f;
        out[0].value *= f;
      },
      nullptr);
  detail::integrate_adaptive(
      sys, xi_inward_start(xp.p, xp.sigma, g.xi_max), g.xi_max, t_in, opts.step_tol,
      -1e-3, [&](std::size_t k, const State& y) { v_in[k] = y[0]; },
      [&](double f) {
        for (double& v : v_in) v *= f;
        in_end_scale *= f;
      },
      nullptr);
  const double match = v_out.back() / v_in.back();
  const double norm = out[0].value;
  for (std::size_t k = 0; k + 1 < t_out.size(); ++k) out[i_out[k]].value = v_out[k] / norm;
  for (std::size_t k = 0; k + 1 < t_in.size(); ++k)
    out[i_in[k]].value = v_in[k] * match / norm;
  out[n - 1].value = in_end_scale * match / norm;
  out[0].value = 1.0;
  return out;
}

}  // namespace

double angular_shooting_defect(double E, double A, const SystemConfig& cfg,
                               const OracleOptions& opts) {
  cfg.validate();
  if (!std::isfinite(E) || !std::isfinite(A))
    throw NonFiniteInput("oracle: non-finite E or A");
  return angular_defect_impl(E, A, cfg, opts, nullptr);
}

ShootingResult oracle_angular(double E, const SystemConfig& cfg,
                              const OracleOptions& opts, std::optional<double> hint) {
  cfg.validate();
  if (!std::isfinite(E)) throw NonFiniteInput("oracle_A: non-finite E");
  const double A0 = angular_root_adaptive(E, cfg, opts, hint);

  std::vector<double> mesh;
  angular_defect_impl(E, A0, cfg, opts, &mesh);
  const double A_h = angular_root_fixed(E, cfg, opts, mesh, 1, A0);
  const double A_h2 = angular_root_fixed(E, cfg, opts, mesh, 2, A_h);

  ShootingResult res;
  res.value = A_h2 + (A_h2 - A_h) / 255.0;
  res.extrapolated = true;
  res.halving_change = std::abs(A_h2 - A_h);
  res.step = detail::max_step(mesh);
  res.defect = angular_defect_impl(E, res.value, cfg, opts, nullptr);
  res.samples = angular_samples(E, res.value, cfg, opts);
  return res;
}

double oracle_A(double E, const SystemConfig& cfg) {
  return oracle_angular(E, cfg).value;
}

double radial_shooting_defect(double E, double A, const SystemConfig& cfg,
                              const OracleOptions& opts) {
  cfg.validate();
  const XiParams xp = xi_params(E, cfg);
  return radial_defect_adaptive(E, A, cfg, opts, radial_geometry(xp.p), nullptr);
}

ShootingResult radial_shooting(double E, double A, const SystemConfig& cfg,
                               const OracleOptions& opts) {
  cfg.validate();
  const XiParams xp = xi_params(E, cfg);
  const RadialGeometry g = radial_geometry(xp.p);
  RadialMeshes meshes;
  ShootingResult res;
  res.value = E;
  res.defect = radial_defect_adaptive(E, A, cfg, opts, g, &meshes);
  res.step = std::max(detail::max_step(meshes.out), detail::max_step(meshes.in));
  res.samples = radial_samples(E, A, cfg, opts, g);
  return res;
}

OracleSolution oracle_solve_full(const SystemConfig& cfg, const OracleOptions& opts) {
  cfg.validate();
  const auto [E_lo, E_hi] = energy_window(cfg.R);
  constexpr int kPoints = 120;
  const double u_lo = std::sqrt(-2.0 / E_lo), u_hi = std::sqrt(-2.0 / E_hi);

  // F(E) on adaptive meshes, A followed along the scan by hint.
  std::optional<double> A_hint;
  const auto F = [&](double E) {
    const double A = angular_root_adaptive(E, cfg, opts, A_hint);
    A_hint = A;
    const XiParams xp = xi_params(E, cfg);
    return radial_defect_adaptive(E, A, cfg, opts, radial_geometry(xp.p), nullptr);
  };

  std::optional<Bracket> br;
  double E_prev = E_lo, F_prev = F(E_lo);
  for (int i = 1; i < kPoints && !br; ++i) {
    const double u = u_lo + (u_hi - u_lo) * double(i) / double(kPoints - 1);
    const double E = i == kPoints - 1 ? E_hi : -2.0 / (u * u);
    const double Fe = F(E);
    if (F_prev == 0.0 || (Fe < 0.0) != (F_prev < 0.0)) br = Bracket{E_prev, E, F_prev, Fe};
    E_prev = E;
    F_prev = Fe;
  }
  if (!br) {
    std::ostringstream msg;
    msg << "oracle_solve: no matching energy in (" << E_lo << ", " << E_hi
        << ") at R = " << cfg.R;
    throw BracketingFailed(msg.str(), {});
  }
  A_hint.reset();
  const double A_br = angular_root_adaptive(br->a, cfg, opts, std::nullopt);
  A_hint = A_br;
  const double E0 = refine(F, *br, 1e-14);

  // Freeze every mesh at E0 and repeat the root search on h and h/2.
  const double A0 = angular_root_adaptive(E0, cfg, opts, A_hint);
  std::vector<double> eta_mesh;
  angular_defect_impl(E0, A0, cfg, opts, &eta_mesh);
  const RadialGeometry g = radial_geometry(xi_params(E0, cfg).p);
  RadialMeshes meshes;
  radial_defect_adaptive(E0, A0, cfg, opts, g, &meshes);

  int iterations = 0;
  const auto root_on = [&](int sub, double near) {
    const auto Fh = [&](double E) {
      ++iterations;
      const double A = angular_root_fixed(E, cfg, opts, eta_mesh, sub, A0);
      return radial_defect_fixed(E, A, cfg, opts, g, meshes, sub);
    };
    const auto b = bracket_near(Fh, near, 1e-10, 1e-3);
    if (!b) throw MatchFailed("oracle_solve: fixed-mesh energy root not bracketed");
    return refine(Fh, *b, 1e-14);
  };
  const double E_h = root_on(1, E0);
  const double E_h2 = root_on(2, E_h);

  OracleSolution sol;
  const double E = E_h2 + (E_h2 - E_h) / 255.0;
  sol.angular = oracle_angular(E, cfg, opts, A0);
  const double A = sol.angular.value;
  sol.radial = radial_shooting(E, A, cfg, opts);
  sol.radial.extrapolated = true;
  sol.radial.halving_change = std::abs(E_h2 - E_h);
  sol.radial.step = std::max(detail::max_step(meshes.out), detail::max_step(meshes.in));

  SeparationPair& pair = sol.pair;
  pair.E_elec = E;
  pair.A = A;
  pair.R = cfg.R;
  pair.E_total = E + 1.0 / cfg.R;
  pair.iterations = iterations;
  pair.defect = std::abs(sol.radial.defect);
  pair.convention = cfg.sign_convention;
  return sol;
}

SeparationPair oracle_solve(const SystemConfig& cfg) {
  return oracle_solve_full(cfg).pair;
}

double ode_residual(EquationKind kind, std::span<const Sample> s, double E, double A,
                    const SystemConfig& cfg) {
  if (s.size() < 101) throw TooFewSamples("ode_residual: need at least 101 samples");
  const double h = s[1].x - s[0].x;
  if (!(h > 0.0)) throw InvalidConfig("ode_residual: samples must ascend");
  for (std::size_t i = 1; i < s.size(); ++i)
    if (std::abs((s[i].x - s[i - 1].x) - h) > 1e-9 * h)
      throw InvalidConfig("ode_residual: samples must be uniformly spaced");
  const double q = eta_q(E, cfg);
  const double sR = cfg.sign() * cfg.R;
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    const double fm2 = s[i - 2].value, fm1 = s[i - 1].value, f0 = s[i].value,
                 fp1 = s[i + 1].value, fp2 = s[i + 2].value;
    const double d1 = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h);
    const double d2 = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h);
    const double x = s[i].x;
    double t1, t2, t3;
    if (kind == EquationKind::angular) {
      t1 = (1.0 - x * x) * d2;
      t2 = -2.0 * x * d1;
      t3 = -(q * x * x + A) * f0;
    } else {
      t1 = (x * x - 1.0) * d2;
      t2 = 2.0 * x * d1;
      t3 = (q * x * x + 2.0 * sR * x + A) * f0;
    }
    worst = std::max(worst, std::abs(t1 + t2 + t3));
    scale = std::max(scale, std::abs(t1) + std::abs(t2) + std::abs(t3));
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace h2ion
