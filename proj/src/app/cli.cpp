#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "h2ion/acceptance.hpp"
#include "h2ion/app.hpp"

namespace h2ion::app {

namespace {

struct SolveArgs {
  double R = 0.0;
  double tol = 1e-12;
  std::string convention = "attractive";
  bool json = false;
};

struct ScanArgs {
  std::optional<double> rmin, rmax, step;
  std::string R_list;
  std::string out;
  std::string convention = "attractive";
};

struct DensityArgs {
  double R = 0.0;
  std::string plane = "xz";
  double half_width = 4.0;
  int n = 201;
  std::string out;
  std::string convention = "attractive";
};

struct ValidateArgs {
  bool quick = false;
  bool full = false;
  bool json = false;
  std::string report;
  std::optional<int> tamper;
};

const auto kConventions = CLI::IsMember({"attractive", "as_printed"});

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  SystemConfig cfg = make_config(a.R, parse_convention(a.convention));
  SolverOptions opts;
  opts.energy_tol = a.tol;
  const SeparationPair p = solve_ground(cfg, opts);
  const ConventionReport conv = convention_check(cfg);
  if (a.json) {
    json j = to_json(p);
    j["convention_check"] = to_json(conv);
    out << j.dump() << "\n";
    return 0;
  }
  char exp_buf[32];
  std::snprintf(exp_buf, sizeof exp_buf, "%.3e", p.defect);
  out << "R           " << csv_number(p.R) << "\n"
      << "E_elec      " << fixed(p.E_elec, 12) << "\n"
      << "E_total     " << fixed(p.E_total, 9) << "\n"
      << "A           " << fixed(p.A, 12) << "\n"
      << "defect      " << exp_buf << "\n"
      << "iterations  " << p.iterations << "\n"
      << "convention  " << to_string(p.convention) << "\n";
  std::string sat;
  for (auto c : conv.satisfies_united_atom) sat += (sat.empty() ? "" : ", ") + std::string(to_string(c));
  out << "united-atom limit met by: " << (sat.empty() ? "none" : sat)
      << "; as_printed bound root: " << (conv.as_printed_brackets_bound_root ? "yes" : "no")
      << "\n";
  return 0;
}

std::vector<double> scan_values(const ScanArgs& a) {
  std::vector<double> Rs;
  if (!a.R_list.empty()) {
    Rs = read_R_list(a.R_list);
    if (Rs.empty()) throw InvalidConfig("--R-list: no R values in " + a.R_list);
  } else {
    if (!a.rmin || !a.rmax || !a.step)
      throw InvalidConfig("scan needs --rmin, --rmax and --step, or --R-list");
    if (!(*a.step > 0.0)) throw InvalidConfig("--step must be > 0");
    if (!(*a.rmin > 0.0)) throw InvalidConfig("--rmin must be > 0");
    if (*a.rmax < *a.rmin) throw InvalidConfig("--rmax must be >= --rmin");
    const long n = static_cast<long>(std::floor((*a.rmax - *a.rmin) / *a.step + 1e-9)) + 1;
    for (long i = 0; i < n; ++i)
      Rs.push_back(std::round((*a.rmin + i * *a.step) * 1e12) / 1e12);
  }
  for (std::size_t i = 0; i < Rs.size(); ++i) {
    if (!(Rs[i] > 0.0) || !std::isfinite(Rs[i]))
      throw InvalidConfig("R values must be finite and > 0");
    if (i > 0 && Rs[i] < Rs[i - 1]) throw InvalidConfig("R values must be sorted ascending");
  }
  return Rs;
}

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  const std::vector<double> Rs = scan_values(a);
  json cfg = {{"R_values", Rs}, {"convention", a.convention}, {"out", a.out}};
  RunManifest manifest("scan", cfg);
  SystemConfig tmpl;
  tmpl.sign_convention = parse_convention(a.convention);
  const std::vector<CurveRow> rows = scan_curve(Rs, tmpl);
  const std::string csv = scan_csv(rows);
  int converged = 0;
  for (const auto& r : rows) converged += r.pair.has_value();
  if (a.out.empty()) {
    out << csv;
  } else {
    write_text_file(a.out, csv);
    manifest.outputs.push_back(a.out);
    json m = manifest.finish();
    m["manifest"]["rows"] = rows.size();
    m["manifest"]["converged"] = converged;
    out << m.dump(2) << "\n";
  }
  return converged > 0 ? 0 : 2;
}

int cmd_density(const DensityArgs& a, std::ostream& out) {
  DensityRequest req;
  req.R = a.R;
  req.plane = parse_plane(a.plane);
  req.half_width = a.half_width;
  req.n = a.n;
  req.prefix = a.out;
  req.convention = parse_convention(a.convention);
  json cfg = {{"R", a.R},         {"plane", a.plane}, {"half_width", a.half_width},
              {"n", a.n},         {"out", a.out},     {"convention", a.convention}};
  RunManifest manifest("density", cfg);
  const DensityOutput d = write_density(req);
  manifest.outputs = d.files;
  out << manifest.finish().dump(2) << "\n";
  return 0;
}

int cmd_figure1(const std::string& outdir, std::ostream& out) {
  json cfg = {{"outdir", outdir},
              {"R_values", figure1_R()},
              {"n", kFigure1Points},
              {"plane", "xz"}};
  RunManifest manifest("figure1", cfg);
  const Figure1Output f = write_figure1(outdir);
  manifest.outputs = f.files;
  out << manifest.finish().dump(2) << "\n";
  return 0;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  acceptance::Options opts;
  opts.mode = a.full ? acceptance::Mode::full : acceptance::Mode::quick;
  opts.tamper = a.tamper;
  const auto results = acceptance::run(opts);
  const json report = acceptance::to_json(results, opts.mode);
  if (a.json) {
    out << report.dump() << "\n";
  } else {
    for (const auto& r : results) out << acceptance::format_line(r) << "\n";
  }
  if (!a.report.empty()) write_text_file(a.report, report.dump(2) + "\n");
  return acceptance::all_passed(results) ? 0 : 2;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact ground state of the hydrogen molecular ion H2+"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve for the ground state at one R");
  solve->add_option("--R", sa.R, "Internuclear distance (bohr)")
      ->required()
      ->check(CLI::PositiveNumber);
  solve->add_option("--tol", sa.tol, "Energy tolerance (hartree, >= 1e-12)")
      ->check(CLI::Range(1e-12, 1.0));
  solve->add_option("--convention", sa.convention, "attractive or as_printed")
      ->check(kConventions);
  solve->add_flag("--json", sa.json, "Single-line JSON output");

  ScanArgs sc;
  auto* scan = app.add_subcommand("scan", "Potential curve over a range or list of R");
  auto* rmin = scan->add_option("--rmin", sc.rmin, "First R (bohr)");
  auto* rmax = scan->add_option("--rmax", sc.rmax, "Last R (bohr)");
  auto* step = scan->add_option("--step", sc.step, "R increment (bohr)");
  auto* list = scan->add_option("--R-list", sc.R_list, "File with one R per line");
  list->excludes(rmin)->excludes(rmax)->excludes(step);
  scan->add_option("--out", sc.out, "CSV output path (stdout when omitted)");
  scan->add_option("--convention", sc.convention, "attractive or as_printed")
      ->check(kConventions);

  DensityArgs da;
  auto* dens = app.add_subcommand("density", "Density grid, axis profile and diagnostics");
  dens->add_option("--R", da.R, "Internuclear distance (bohr)")
      ->required()
      ->check(CLI::PositiveNumber);
  dens->add_option("--plane", da.plane, "xz or xy")->check(CLI::IsMember({"xz", "xy"}));
  dens->add_option("--half-width", da.half_width, "Grid half width (bohr)")
      ->check(CLI::PositiveNumber);
  dens->add_option("--n", da.n, "Points per axis")->check(CLI::Range(64, 4096));
  dens->add_option("--out", da.out, "Output prefix")->required();
  dens->add_option("--convention", da.convention, "attractive or as_printed")
      ->check(kConventions);

  std::string outdir = "figure1";
  auto* fig = app.add_subcommand("figure1", "Reproduce the four density panels");
  fig->add_option("--outdir", outdir, "Output directory");

  ValidateArgs va;
  auto* val = app.add_subcommand("validate", "Run the acceptance criteria");
  auto* quick = val->add_flag("--quick", va.quick, "Limits and R = 2 oracle check");
  auto* full = val->add_flag("--full", va.full, "Every criterion");
  quick->excludes(full);
  val->add_flag("--json", va.json, "Single-line JSON report on stdout");
  val->add_option("--report", va.report, "Write the JSON report to this file");
  val->add_option("--tamper", va.tamper)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) return cmd_solve(sa, out);
    if (*scan) return cmd_scan(sc, out);
    if (*dens) return cmd_density(da, out);
    if (*fig) return cmd_figure1(outdir, out);
    if (*val) return cmd_validate(va, out);
  } catch (const OutputError& e) {
    err << json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
    return 3;
  } catch (const InvalidConfig& e) {
    err << json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const BracketingFailed& e) {
    json scan = json::array();
    for (const auto& s : e.scan()) scan.push_back({s.E, s.F});
    err << json{{"error", e.kind()}, {"message", e.what()}, {"scan_E_F", scan}}.dump() << "\n";
    return 2;
  } catch (const Error& e) {
    err << json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace h2ion::app
