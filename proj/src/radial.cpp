#include "h2ion/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "h2ion/errors.hpp"

namespace h2ion {

namespace {

constexpr double kTiny = 1e-300;
constexpr long kMaxDepth = 1L << 24;

// Ratios r_n = g_n / g_{n-1} of the minimal solution for n = 1..count,
// from the backward recurrence r_n = -gamma_n / (beta_n + alpha_n r_{n+1})
// started with r_{depth+1} = 0.
std::vector<double> backward_ratios(const JaffeRecurrence& rec, long depth,
                                    int count) {
  std::vector<double> ratios(count + 1, 0.0);
  double r = 0.0;
  for (long n = depth; n >= 1; --n) {
    const double dn = double(n);
    double den = rec.beta(dn) + rec.alpha(dn) * r;
    if (std::abs(den) < kTiny) den = kTiny;
    r = -rec.gamma(dn) / den;
    if (n <= count) ratios[n] = r;
  }
  return ratios;
}

double first_ratio(const JaffeRecurrence& rec, long depth) {
  double r = 0.0;
  for (long n = depth; n >= 1; --n) {
    const double dn = double(n);
    double den = rec.beta(dn) + rec.alpha(dn) * r;
    if (std::abs(den) < kTiny) den = kTiny;
    r = -rec.gamma(dn) / den;
  }
  return r;
}

double normalized_defect(const JaffeRecurrence& rec, double r1) {
  const double b0 = rec.beta(0.0);
  const double a0r = rec.alpha(0.0) * r1;
  return (b0 + a0r) / (1.0 + std::abs(b0) + std::abs(a0r));
}

// Depth at which the dominant/minimal ratio at n = 1 has fallen below
// exp(-8 sqrt(p depth)) ~ 1e-16.
long initial_depth(double p, long floor_depth) {
  const double est = 24.0 / std::max(p, 1e-12);
  return std::clamp(static_cast<long>(est), floor_depth, kMaxDepth / 2);
}

void fill_envelope(RadialSolution& sol) {
  auto& envelope = sol.envelope;
  envelope.assign(sol.jaffe_coeffs.size(), 0.0);
  double m = 0.0;
  for (std::size_t i = sol.jaffe_coeffs.size(); i-- > 0;) {
    m = std::max(m, std::abs(sol.jaffe_coeffs[i]));
    envelope[i] = m;
  }
}

double tail_at(const std::vector<double>& g, double t) {
  const int N = static_cast<int>(g.size()) - 1;
  double tail = 0.0;
  for (int n = std::max(0, N - 3); n <= N; ++n)
    tail = std::max(tail, std::abs(g[n]) * std::pow(t, n));
  return tail;
}

}  // namespace

JaffeRecurrence jaffe_recurrence(double E, double A, const SystemConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(E) || !std::isfinite(A))
    throw NonFiniteInput("radial: non-finite E or A");
  if (E >= 0.0)
    throw NonBoundEnergy("radial: E must be negative for a bound state");
  JaffeRecurrence rec;
  rec.p = cfg.R * std::sqrt(-0.5 * E);
  rec.sigma = cfg.sign() * cfg.R / rec.p - 1.0;
  rec.c0 = A - rec.p * rec.p + 2.0 * rec.p * rec.sigma + rec.sigma;
  return rec;
}

RadialSolution jaffe_coeffs(double E, double A, const SystemConfig& cfg, int N) {
  if (N < 16) throw InvalidConfig("jaffe_coeffs: N must be >= 16");
  const JaffeRecurrence rec = jaffe_recurrence(E, A, cfg);

  long depth = std::max<long>(initial_depth(rec.p, 64), 2L * N + 64);
  std::vector<double> ratios = backward_ratios(rec, depth, N);
  for (;;) {
    if (2 * depth > kMaxDepth)
      throw ConvergenceFailed("jaffe_coeffs: backward recurrence did not settle");
    std::vector<double> deeper = backward_ratios(rec, 2 * depth, N);
    double worst = 0.0;
    for (int n = 1; n <= N; ++n) {
      const double scale = std::max(std::abs(deeper[n]), 1e-300);
      worst = std::max(worst, std::abs(deeper[n] - ratios[n]) / scale);
    }
    ratios = std::move(deeper);
    depth *= 2;
    if (worst <= 1e-14) break;
  }

  RadialSolution sol;
  sol.p = rec.p;
  sol.sigma = rec.sigma;
  sol.N = N;
  sol.E = E;
  sol.A = A;
  sol.R = cfg.R;
  sol.jaffe_coeffs.assign(N + 1, 0.0);
  sol.jaffe_coeffs[0] = 1.0;
  for (int n = 1; n <= N; ++n)
    sol.jaffe_coeffs[n] = sol.jaffe_coeffs[n - 1] * ratios[n];
  fill_envelope(sol);
  sol.xi_max = 0.0;
  sol.tail_estimate = tail_at(sol.jaffe_coeffs, 1.0);
  return sol;
}

RadialSolution solve_radial(double E, double A, const SystemConfig& cfg,
                            double xi_max) {
  if (!(xi_max >= 1.0)) throw InvalidConfig("solve_radial: xi_max must be >= 1");
  const double t = (xi_max - 1.0) / (xi_max + 1.0);
  constexpr int kMaxN = 1 << 21;
  for (int N = 32;; N *= 2) {
    RadialSolution sol = jaffe_coeffs(E, A, cfg, N);
    double peak = 1.0, tn = 1.0;
    for (int n = 0; n <= N; ++n, tn *= t)
      peak = std::max(peak, std::abs(sol.jaffe_coeffs[n]) * tn);
    sol.xi_max = xi_max;
    sol.tail_estimate = tail_at(sol.jaffe_coeffs, t);
    if (sol.tail_estimate <= 1e-15 * peak) return sol;
    if (N >= kMaxN) {
      std::ostringstream msg;
      msg << "solve_radial: Jaffe series tail " << sol.tail_estimate
          << " at N = " << N << " for xi_max = " << xi_max;
      throw TruncationNotConverged(msg.str());
    }
  }
}

double radial_residual(double E, double A, const SystemConfig& cfg, int depth) {
  if (depth < 1) throw InvalidConfig("radial_residual: depth must be >= 1");
  const JaffeRecurrence rec = jaffe_recurrence(E, A, cfg);
  return normalized_defect(rec, first_ratio(rec, depth));
}

double radial_residual(double E, double A, const SystemConfig& cfg) {
  const JaffeRecurrence rec = jaffe_recurrence(E, A, cfg);
  long depth = initial_depth(rec.p, 64);
  double prev = normalized_defect(rec, first_ratio(rec, depth));
  for (;;) {
    if (2 * depth > kMaxDepth)
      throw ConvergenceFailed("radial_residual: continued fraction did not settle");
    depth *= 2;
    const double next = normalized_defect(rec, first_ratio(rec, depth));
    if (std::abs(next - prev) <= 1e-15) return next;
    prev = next;
  }
}

RadialDerivs eval_X_derivs(const RadialSolution& sol, double xi) {
  xi = std::max(xi, 1.0);
  const double t = (xi - 1.0) / (xi + 1.0);
  const auto& g = sol.jaffe_coeffs;

  const auto& envelope = sol.envelope;
  double S = 0.0, St = 0.0, Stt = 0.0;
  double p0 = 1.0, p1 = 0.0, p2 = 0.0;  // t^n, t^(n-1), t^(n-2)
  const std::size_t count = g.size();
  for (std::size_t n = 0; n < count; ++n) {
    const double dn = double(n);
    S += g[n] * p0;
    St += dn * g[n] * p1;
    Stt += dn * (dn - 1.0) * g[n] * p2;
    if (n > 4) {
      const double bound = envelope[n] * p0 * (1.0 + dn * dn);
      if (bound < 1e-18 * (std::abs(S) + std::abs(St) + std::abs(Stt))) break;
    }
    p2 = p1;
    p1 = p0;
    p0 *= t;
  }

  const double xp1 = xi + 1.0;
  const double phi = -sol.p * xi + sol.sigma * std::log(xp1);
  const double dphi = -sol.p + sol.sigma / xp1;
  const double ddphi = -sol.sigma / (xp1 * xp1);
  const double dt = 2.0 / (xp1 * xp1);
  const double ddt = -4.0 / (xp1 * xp1 * xp1);
  const double Sx = St * dt;
  const double Sxx = Stt * dt * dt + St * ddt;
  const double e = std::exp(phi);
  return {e * S, e * (dphi * S + Sx),
          e * ((ddphi + dphi * dphi) * S + 2.0 * dphi * Sx + Sxx)};
}

double eval_X(const RadialSolution& sol, double xi) {
  return eval_X_derivs(sol, xi).value;
}

double radial_series_residual(const RadialSolution& sol, const SystemConfig& cfg,
                              const std::vector<double>& xis) {
  double worst = 0.0;
  for (double xi : xis) {
    const RadialDerivs x = eval_X_derivs(sol, xi);
    const double V = -sol.p * sol.p * xi * xi + 2.0 * cfg.sign() * cfg.R * xi + sol.A;
    const double t1 = (xi * xi - 1.0) * x.d2;
    const double t2 = 2.0 * xi * x.d1;
    const double t3 = V * x.value;
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3);
    if (scale > 0.0) worst = std::max(worst, std::abs(t1 + t2 + t3) / scale);
  }
  return worst;
}

}  // namespace h2ion
