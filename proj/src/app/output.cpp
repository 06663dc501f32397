#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "h2ion/angular.hpp"
#include "h2ion/app.hpp"

namespace h2ion::app {

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void append_row(std::string& out, std::initializer_list<double> cols) {
  bool first = true;
  for (double c : cols) {
    if (!first) out.push_back(',');
    out += csv_number(c);
    first = false;
  }
  out.push_back('\n');
}

std::string grid_csv(const DensityGrid& g) {
  std::string out = g.plane == Plane::xy ? "x,y,rho\n" : "x,z,rho\n";
  out.reserve(out.size() + g.values.size() * 48);
  for (int j = 0; j < g.dims[1]; ++j)
    for (int i = 0; i < g.dims[0]; ++i) append_row(out, {g.u(i), g.v(j), g.at(i, j)});
  return out;
}

std::string axis_csv(const AxisReport& a) {
  std::string out = "z,rho\n";
  for (std::size_t i = 0; i < a.z.size(); ++i) append_row(out, {a.z[i], a.rho[i]});
  return out;
}

std::string plot_script(const DensityRequest& req, const std::string& grid_name,
                        const std::string& png_name) {
  const char* vlabel = req.plane == Plane::xy ? "y (bohr)" : "z (bohr)";
  std::ostringstream s;
  s << "# gnuplot script: heat map of " << grid_name << "\n"
    << "# electron density of the H2+ ground state, R = " << csv_number(req.R)
    << " bohr, " << to_string(req.plane) << " plane\n"
    << "set terminal pngcairo size 900,800\n"
    << "set output '" << png_name << "'\n"
    << "set datafile separator ','\n"
    << "set size ratio -1\n"
    << "set xlabel 'x (bohr)'\n"
    << "set ylabel '" << vlabel << "'\n"
    << "set cblabel 'rho (bohr^-3)'\n"
    << "set title 'H2+ density, R = " << csv_number(req.R) << " bohr'\n"
    << "set palette rgbformulae 33,13,10\n"
    << "set xrange [" << csv_number(-req.half_width) << ":" << csv_number(req.half_width)
    << "]\n"
    << "set yrange [" << csv_number(-req.half_width) << ":" << csv_number(req.half_width)
    << "]\n"
    << "plot '" << grid_name << "' skip 1 using 1:2:3 with image notitle\n";
  return s.str();
}

struct ExpectedStructure {
  std::string description;
  bool asserted;
};

ExpectedStructure expected_for(const std::string& panel) {
  if (panel == "a")
    return {"a nearly spherical cloud, only slightly flattened or stretched along the bond",
            true};
  if (panel == "b")
    return {"two distinct peaks, one sitting on each nucleus", false};
  if (panel == "c")
    return {"a single peak at the bond midpoint, between the two nuclei", false};
  return {"the ordinary molecular shape with one peak on each nucleus", true};
}

json reference_comparison(const std::string& panel, double R, const AxisReport& axis,
                          const WaveFunction& wf) {
  const ExpectedStructure exp = expected_for(panel);
  const double half = 0.5 * R;
  const auto near = [&](double z, double target) {
    return std::abs(z - target) <= axis.step;
  };
  const bool two_at_nuclei = axis.maxima.size() == 2 && near(axis.maxima[0], -half) &&
                             near(axis.maxima[1], half);
  const bool one_central = axis.maxima.size() == 1 && near(axis.maxima[0], 0.0);

  bool agrees = false;
  json expected_maxima = json::array();
  if (panel == "a") {
    agrees = std::abs(axis.anisotropy) <= 0.01;
  } else if (panel == "c") {
    agrees = one_central;
    expected_maxima.push_back(0.0);
  } else {
    agrees = two_at_nuclei;
    expected_maxima = {-half, half};
  }

  std::ostringstream finding;
  finding << "exact density has " << axis.maxima.size() << " axis maxim"
          << (axis.maxima.size() == 1 ? "um" : "a");
  if (two_at_nuclei) finding << ", on the nuclei (z = +-" << csv_number(half) << ")";
  if (one_central) finding << ", at the midpoint";
  finding << "; anisotropy " << csv_number(axis.anisotropy);

  const double rho_mid = density_at(wf, 0.0, 0.0, 0.0);
  const double rho_nuc = density_at(wf, focus_point(2));
  return {{"panel", panel},
          {"R", R},
          {"expected_structure", exp.description},
          {"expected_axis_maxima", expected_maxima},
          {"asserted", exp.asserted},
          {"computed_axis_maxima", axis.maxima},
          {"axis_step", axis.step},
          {"anisotropy", axis.anisotropy},
          {"rho_midpoint", rho_mid},
          {"rho_nucleus", rho_nuc},
          {"outcome", agrees ? "agreement" : "discrepancy"},
          {"finding", finding.str()}};
}

}  // namespace

json to_json(const SeparationPair& p) {
  return {{"R", p.R},
          {"E_elec", p.E_elec},
          {"E_total", p.E_total},
          {"A", p.A},
          {"defect", p.defect},
          {"iterations", p.iterations},
          {"convention", std::string(to_string(p.convention))}};
}

json to_json(const ConventionReport& r) {
  json cases = json::array();
  for (const auto& c : r.cases) {
    cases.push_back({{"convention", std::string(to_string(c.convention))},
                     {"R", c.R},
                     {"bound_root_found", c.bound_root_found},
                     {"E_elec", c.E_elec ? json(*c.E_elec) : json(nullptr)},
                     {"A", c.A ? json(*c.A) : json(nullptr)},
                     {"united_atom_limit",
                      c.united_atom_limit ? json(*c.united_atom_limit) : json(nullptr)},
                     {"detail", c.detail}});
  }
  json sat = json::array();
  for (auto c : r.satisfies_united_atom) sat.push_back(std::string(to_string(c)));
  return {{"active_default", std::string(to_string(r.active_default))},
          {"cases", cases},
          {"satisfies_united_atom_limit", sat},
          {"as_printed_brackets_bound_root", r.as_printed_brackets_bound_root}};
}

json to_json(const TwoTermDecomposition& d) {
  return {{"sqrtA", d.sqrtA},
          {"D1", d.D1},
          {"D2", d.D2},
          {"assembly_residual", finite_or_null(d.assembly_residual)},
          {"eta0_defect", finite_or_null(d.eta0_defect)},
          {"fit_mismatch", finite_or_null(d.fit_mismatch)},
          {"g1_diverging", d.g1_diverging},
          {"g2_diverging", d.g2_diverging},
          {"K", d.K}};
}

json to_json(const TerminationReport& r) {
  return {{"terminates", r.terminates},
          {"degree", r.degree ? json(*r.degree) : json(nullptr)},
          {"max_coeff", finite_or_null(r.max_coeff)},
          {"tail_max", finite_or_null(r.tail_max)},
          {"polynomial_residual",
           r.polynomial_residual ? finite_or_null(*r.polynomial_residual) : json(nullptr)},
          {"evidence", r.evidence}};
}

json to_json(const CuspResult& c) {
  return {{"nucleus", c.nucleus},     {"radii", c.radii},   {"averages", c.averages},
          {"rho0", c.rho0},           {"kappa", c.kappa},   {"fit_rms", c.fit_rms},
          {"directions", c.directions}};
}

const std::vector<double>& figure1_R() {
  static const std::vector<double> values{0.008, 0.012, 0.025, 2.0};
  return values;
}

std::string panel_letter(double R) {
  const auto& v = figure1_R();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (R == v[i]) return std::string(1, char('a' + i));
  return {};
}

double figure1_half_width(double R) { return R < 1.0 ? std::max(4.0 * R, 0.08) : 4.0; }

int axis_points(double R) {
  const double span = 4.0 * R + 4.0;
  const int n = static_cast<int>(std::ceil(span / (R / 40.0))) + 1;
  return std::clamp(n | 1, 2001, 40001);
}

DensityOutput write_density(const DensityRequest& req) {
  const SystemConfig cfg = make_config(req.R, req.convention);
  const WaveFunction wf = make_wavefunction(cfg);
  const DensityGrid grid = density_slice(wf, req.plane, req.half_width, req.n);
  const AxisReport axis = axis_report(wf, axis_points(req.R));
  const CuspResult c1 = cusp_diagnostic(wf, 1);
  const CuspResult c2 = cusp_diagnostic(wf, 2);

  const std::string stem = req.prefix.filename().string();
  const auto path_for = [&](const std::string& suffix) {
    auto p = req.prefix;
    p.replace_filename(stem + suffix);
    return p;
  };
  const auto grid_path = path_for("_grid.csv");
  const auto axis_path = path_for("_axis.csv");
  const auto meta_path = path_for("_meta.json");
  const auto plot_path = path_for("_plot.txt");

  json meta = to_json(wf.pair);
  meta["energy_tol"] = grid.meta.energy_tol;
  meta["norm_constant"] = wf.norm;
  meta["norm_integral"] = norm_integral(wf);
  meta["xi_max"] = wf.xi_max;
  meta["grid"] = {{"file", grid_path.filename().string()},
                  {"plane", std::string(to_string(grid.plane))},
                  {"quantity", "electron density in the plane (a slice, not a projection)"},
                  {"columns", grid.plane == Plane::xy ? json{"x", "y", "rho"}
                                                      : json{"x", "z", "rho"}},
                  {"layout", "row-major, x varies fastest"},
                  {"n", req.n},
                  {"half_width", req.half_width},
                  {"spacing", grid.spacing},
                  {"origin", grid.origin},
                  {"rho_max", *std::max_element(grid.values.begin(), grid.values.end())},
                  {"rho_min", *std::min_element(grid.values.begin(), grid.values.end())}};
  if (grid.plane == Plane::xz) meta["grid"]["enclosed_charge"] = enclosed_charge(grid);
  meta["axis"] = {{"file", axis_path.filename().string()},
                  {"n", axis.z.size()},
                  {"z_range", {axis.z.front(), axis.z.back()}},
                  {"step", axis.step},
                  {"maxima", axis.maxima},
                  {"anisotropy", axis.anisotropy},
                  {"z2", axis.z2},
                  {"x2", axis.x2}};
  meta["cusp"] = {to_json(c1), to_json(c2)};
  meta["sphere_variation"] = {{"radius", 0.05}, {"value", sphere_variation(wf, 0.05)}};
  meta["convention_check"] = to_json(convention_check(cfg));
  if (const std::string panel = panel_letter(req.R); !panel.empty())
    meta["reference_comparison"] = reference_comparison(panel, req.R, axis, wf);
  meta["plot_script"] = plot_path.filename().string();

  DensityOutput out;
  write_text_file(grid_path, grid_csv(grid));
  write_text_file(axis_path, axis_csv(axis));
  write_text_file(meta_path, meta.dump(2) + "\n");
  write_text_file(plot_path, plot_script(req, grid_path.filename().string(),
                                         stem + "_heatmap.png"));
  out.files = {grid_path, axis_path, meta_path, plot_path};
  out.meta = std::move(meta);
  return out;
}

Figure1Output write_figure1(const std::filesystem::path& outdir) {
  Figure1Output out;
  json panels = json::array();
  for (double R : figure1_R()) {
    DensityRequest req;
    req.R = R;
    req.plane = Plane::xz;
    req.half_width = figure1_half_width(R);
    req.n = kFigure1Points;
    req.prefix = outdir / ("fig1" + panel_letter(R));
    DensityOutput d = write_density(req);
    out.files.insert(out.files.end(), d.files.begin(), d.files.end());
    json files = json::array();
    for (const auto& f : d.files) files.push_back(f.filename().string());
    panels.push_back({{"panel", panel_letter(R)},
                      {"R", R},
                      {"half_width", req.half_width},
                      {"n", req.n},
                      {"files", files},
                      {"E_elec", d.meta["E_elec"]},
                      {"E_total", d.meta["E_total"]},
                      {"A", d.meta["A"]},
                      {"axis_maxima", d.meta["axis"]["maxima"]},
                      {"anisotropy", d.meta["axis"]["anisotropy"]},
                      {"cusp_kappa", {d.meta["cusp"][0]["kappa"], d.meta["cusp"][1]["kappa"]}},
                      {"reference_comparison", d.meta["reference_comparison"]}});
  }

  const AmplitudeTable table = term_amplitudes(figure1_R(), make_config(2.0));
  std::string csv = "R,D1,D2,abs_D2_over_D1,assembly_residual,eta0_defect,fit_mismatch,flag\n";
  json rows = json::array();
  double max_dev = 0.0;
  double small_R_ratio_R = std::numeric_limits<double>::infinity();
  for (const auto& r : table.rows) {
    const double nan = std::nan("");
    const auto& f = r.fit;
    csv += csv_number(r.R) + ',' + csv_number(f ? f->D1 : nan) + ',' +
           csv_number(f ? f->D2 : nan) + ',' + csv_number(r.ratio) + ',' +
           csv_number(f ? f->assembly_residual : nan) + ',' +
           csv_number(f ? f->eta0_defect : nan) + ',' + csv_number(f ? f->fit_mismatch : nan) +
           ',' + r.flag + '\n';
    json row = {{"R", r.R}, {"ratio", finite_or_null(r.ratio)}, {"flag", r.flag}};
    if (f) row["fit"] = to_json(*f);
    if (r.pair) row["pair"] = to_json(*r.pair);
    rows.push_back(row);
    if (std::isfinite(r.ratio)) max_dev = std::max(max_dev, std::abs(r.ratio - 1.0));
  }
  const auto amp_path = outdir / "fig1_amplitudes.csv";
  write_text_file(amp_path, csv);

  double small_R_ratio = std::nan("");
  for (const auto& r : table.rows) {
    if (std::isfinite(r.ratio) && r.R < small_R_ratio_R) {
      small_R_ratio = r.ratio;
      small_R_ratio_R = r.R;
    }
  }

  const SeparationPair p2 = solve_ground(make_config(2.0));
  const TerminationReport term = termination_check(p2.E_elec, p2.A, make_config(2.0), 512, 1e-14);

  std::ostringstream amp_finding;
  amp_finding << "|D2/D1| stays within " << csv_number(max_dev)
              << " of 1 over the panel set (trend with R: " << table.ratio_trend
              << "); the second term does not dominate at small R";
  json report = {
      {"figure", "electron density panels"},
      {"settings",
       {{"plane", "xz"},
        {"n", kFigure1Points},
        {"half_width_rule", "max(4 R, 0.08) bohr for R < 1, 4 bohr otherwise"},
        {"R_values", figure1_R()}}},
      {"panels", panels},
      {"amplitudes",
       {{"file", amp_path.filename().string()},
        {"rows", rows},
        {"ratio_monotone", table.ratio_monotone},
        {"ratio_trend", table.ratio_trend},
        {"max_abs_ratio_minus_one", max_dev},
        {"reference_comparison",
         {{"expected", "the second exponential term takes over as the nuclei approach"},
          {"finding", amp_finding.str()},
          {"outcome", small_R_ratio > 1.1 ? "agreement" : "discrepancy"}}}}},
      {"termination_check_R2", {{"pair", to_json(p2)}, {"report", to_json(term)}}}};
  const auto report_path = outdir / "fig1_report.json";
  write_text_file(report_path, report.dump(2) + "\n");
  out.files.push_back(amp_path);
  out.files.push_back(report_path);
  out.report = std::move(report);
  return out;
}

std::string scan_csv(const std::vector<CurveRow>& rows) {
  std::string out = "R,E_elec,E_total,A,defect,converged\n";
  for (const auto& r : rows) {
    out += csv_number(r.R);
    if (r.pair) {
      out += ',' + csv_number(r.pair->E_elec) + ',' + csv_number(r.pair->E_total) + ',' +
             csv_number(r.pair->A) + ',' + csv_number(r.pair->defect) + ",true\n";
    } else {
      out += ",,,,,false\n";
    }
  }
  return out;
}

}  // namespace h2ion::app
