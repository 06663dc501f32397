#pragma once

#include <optional>
#include <string>
#include <vector>

#include "h2ion/errors.hpp"
#include "h2ion/geometry.hpp"

namespace h2ion {

struct SolverOptions {
  double energy_tol = 1e-12;  // hartree, must be >= 1e-12
  int max_iterations = 200;
  int scan_points = 120;  // bracketing samples across the energy window
};

struct SeparationPair {
  double E_elec = 0.0;   // hartree
  double A = 0.0;
  double R = 0.0;        // bohr
  double E_total = 0.0;  // E_elec + 1/R
  int iterations = 0;
  double defect = 0.0;   // |radial_residual| at the returned E
  SignConvention convention = SignConvention::attractive;
};

struct ScanSample {
  double E = 0.0;
  double F = 0.0;
};

class BracketingFailed : public Error {
 public:
  BracketingFailed(const std::string& what, std::vector<ScanSample> scan)
      : Error("BracketingFailed", what), scan_(std::move(scan)) {}
  const std::vector<ScanSample>& scan() const noexcept { return scan_; }

 private:
  std::vector<ScanSample> scan_;
};

/// F(E) = radial_residual(E, A(E)) with A slaved to E by solve_angular.
double quantization_function(double E, const SystemConfig& cfg);

/// Lower and upper end of the bracketing window,
/// (max(-2.2, -2 - 1/R), -0.45).
std::pair<double, double> energy_window(double R);

/// The F(E) samples solve_ground brackets from, ascending in E. The samples
/// are uniform in u = 1/sqrt(-E/2), where the zeros of F are roughly evenly
/// spaced.
std::vector<ScanSample> energy_scan(const SystemConfig& cfg, int points);

/// Lowest E in the window with F(E) = 0. Sign changes of F across poles are
/// recognized by |F| staying of order one and skipped.
SeparationPair solve_ground(const SystemConfig& cfg, const SolverOptions& opts = {});

struct CurveRow {
  double R = 0.0;
  std::optional<SeparationPair> pair;
  std::string error_kind;  // empty on success
  std::string error;
};

/// One row per R in input order; a failing row records its error and the
/// scan continues. Rows are solved in parallel when OpenMP is available.
std::vector<CurveRow> scan_curve(const std::vector<double>& R_values,
                                 const SystemConfig& tmpl,
                                 const SolverOptions& opts = {});

struct ConventionCase {
  SignConvention convention = SignConvention::attractive;
  double R = 0.0;
  bool bound_root_found = false;
  std::optional<double> E_elec;
  std::optional<double> A;
  /// Only meaningful at the united-atom R: |E_elec + 2| <= 1e-3.
  std::optional<bool> united_atom_limit;
  std::string detail;
};

struct ConventionReport {
  SignConvention active_default = SignConvention::attractive;
  std::vector<ConventionCase> cases;
  /// Conventions whose R = 1e-4 solve lands on E_elec = -2 within 1e-3.
  std::vector<SignConvention> satisfies_united_atom;
  bool as_printed_brackets_bound_root = false;
};

/// Solves R in {1e-4, 2} under both conventions. Never throws on solver
/// failure; failures become report content.
ConventionReport convention_check(const SystemConfig& cfg);

}  // namespace h2ion
