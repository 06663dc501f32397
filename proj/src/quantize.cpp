#include "h2ion/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "h2ion/angular.hpp"
#include "h2ion/radial.hpp"
#include "root_refine.hpp"

namespace h2ion {

namespace {

constexpr double kWindowTop = -0.45;
// |F| at a refined sign change below which it is a zero rather than a pole.
constexpr double kRootThreshold = 1e-6;
constexpr double kDefectLimit = 1e-10;

}  // namespace

double quantization_function(double E, const SystemConfig& cfg) {
  const AngularSolution ang = solve_angular(E, cfg);
  return radial_residual(E, ang.A, cfg);
}

std::pair<double, double> energy_window(double R) {
  return {std::max(-2.2, -2.0 - 1.0 / R), kWindowTop};
}

namespace {

std::vector<double> scan_energies(const SystemConfig& cfg, int points) {
  cfg.validate();
  if (points < 2) throw InvalidConfig("energy_scan: need at least 2 points");
  const auto [E_lo, E_hi] = energy_window(cfg.R);
  const double u_lo = std::sqrt(-2.0 / E_lo);
  const double u_hi = std::sqrt(-2.0 / E_hi);
  std::vector<double> Es(points);
  for (int i = 0; i < points; ++i) {
    const double u = u_lo + (u_hi - u_lo) * double(i) / double(points - 1);
    Es[i] = i == 0 ? E_lo : (i == points - 1 ? E_hi : -2.0 / (u * u));
  }
  return Es;
}

}  // namespace

std::vector<ScanSample> energy_scan(const SystemConfig& cfg, int points) {
  std::vector<ScanSample> scan;
  for (double E : scan_energies(cfg, points))
    scan.push_back({E, quantization_function(E, cfg)});
  return scan;
}

SeparationPair solve_ground(const SystemConfig& cfg, const SolverOptions& opts) {
  cfg.validate();
  if (!(opts.energy_tol >= 1e-12))
    throw InvalidConfig("solve_ground: energy_tol must be >= 1e-12");
  if (opts.max_iterations < 1)
    throw InvalidConfig("solve_ground: max_iterations must be positive");

  const auto F = [&](double E) { return quantization_function(E, cfg); };

  // Samples are taken lazily from the bottom of the window so the search
  // stops at the first genuine zero.
  std::vector<ScanSample> scan;
  for (double E : scan_energies(cfg, opts.scan_points)) {
    scan.push_back({E, F(E)});
    if (scan.size() < 2) continue;
    const ScanSample& a = scan[scan.size() - 2];
    const ScanSample& b = scan.back();
    if (a.F == 0.0 || (a.F < 0.0) != (b.F < 0.0)) {
      const detail::RootResult r = detail::refine_root(
          F, a.E, b.E, a.F, b.F, opts.energy_tol, opts.max_iterations);
      if (std::abs(r.fx) > kRootThreshold) continue;  // pole
      if (!r.converged) {
        std::ostringstream msg;
        msg << "solve_ground: no convergence to " << opts.energy_tol
            << " hartree after " << r.iterations << " iterations at R = " << cfg.R;
        throw ConvergenceFailed(msg.str());
      }
      SeparationPair out;
      out.E_elec = r.x;
      out.A = solve_angular(r.x, cfg).A;
      out.R = cfg.R;
      out.E_total = r.x + 1.0 / cfg.R;
      out.iterations = r.iterations;
      out.defect = std::abs(r.fx);
      out.convention = cfg.sign_convention;
      if (out.defect > kDefectLimit) {
        std::ostringstream msg;
        msg << "solve_ground: residual " << out.defect << " at E = " << r.x
            << " exceeds " << kDefectLimit;
        throw ConvergenceFailed(msg.str());
      }
      return out;
    }
  }
  std::ostringstream msg;
  msg << "solve_ground: F(E) has no zero crossing in (" << scan.front().E << ", "
      << scan.back().E << ") at R = " << cfg.R << " ("
      << to_string(cfg.sign_convention) << ")";
  throw BracketingFailed(msg.str(), scan);
}

std::vector<CurveRow> scan_curve(const std::vector<double>& R_values,
                                 const SystemConfig& tmpl,
                                 const SolverOptions& opts) {
  for (std::size_t i = 0; i < R_values.size(); ++i) {
    if (!(R_values[i] > 0.0) || !std::isfinite(R_values[i]))
      throw InvalidConfig("scan_curve: R values must be finite and positive");
    if (i > 0 && R_values[i] < R_values[i - 1])
      throw InvalidConfig("scan_curve: R values must be sorted ascending");
  }
  std::vector<CurveRow> rows(R_values.size());
  const long n = static_cast<long>(R_values.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    CurveRow& row = rows[i];
    row.R = R_values[i];
    SystemConfig cfg = tmpl;
    cfg.R = row.R;
    try {
      row.pair = solve_ground(cfg, opts);
    } catch (const Error& e) {
      row.error_kind = e.kind();
      row.error = e.what();
    }
  }
  return rows;
}

ConventionReport convention_check(const SystemConfig& cfg) {
  ConventionReport report;
  report.active_default = cfg.sign_convention;
  for (SignConvention c : {SignConvention::attractive, SignConvention::as_printed}) {
    for (double R : {1e-4, 2.0}) {
      ConventionCase cc;
      cc.convention = c;
      cc.R = R;
      try {
        const SeparationPair pair = solve_ground(make_config(R, c));
        cc.bound_root_found = true;
        cc.E_elec = pair.E_elec;
        cc.A = pair.A;
        cc.detail = "bound root bracketed";
      } catch (const BracketingFailed& e) {
        cc.detail = std::string("no sign change of F(E) over ") +
                    std::to_string(e.scan().size()) + " window samples";
      } catch (const Error& e) {
        cc.detail = e.kind() + ": " + e.what();
      }
      if (R < 1e-3) {
        cc.united_atom_limit = cc.E_elec && std::abs(*cc.E_elec + 2.0) <= 1e-3;
        if (*cc.united_atom_limit) report.satisfies_united_atom.push_back(c);
      }
      if (c == SignConvention::as_printed && cc.bound_root_found)
        report.as_printed_brackets_bound_root = true;
      report.cases.push_back(std::move(cc));
    }
  }
  return report;
}

}  // namespace h2ion
