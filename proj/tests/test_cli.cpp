#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "h2ion/app.hpp"

namespace fs = std::filesystem;
using h2ion::app::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "h2ion");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = h2ion::app::run_cli(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) {
  const fs::path p = fs::path(H2ION_TEST_TMP) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream ss(s);
  for (std::string l; std::getline(ss, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("solve") {
  const auto r = cli({"solve", "--R", "2.0"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("E_total     -0.602634214\n") != std::string::npos);

  const auto j = json::parse(cli({"solve", "--R", "1e-4", "--json"}).out);
  CHECK(std::abs(j["E_elec"].get<double>() + 2.0) <= 1e-3);
  CHECK(j["convention_check"]["active_default"] == "attractive");

  const auto bad = cli({"solve", "--R", "-1"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("--R") != std::string::npos);

  const auto printed = cli({"solve", "--R", "2", "--convention", "as_printed"});
  CHECK(printed.code == 2);
  CHECK(json::parse(printed.err)["error"] == "BracketingFailed");
  CHECK(cli({"solve"}).code == 1);
  CHECK(cli({"solve", "--R", "2", "--tol", "1e-14"}).code == 1);
}

TEST_CASE("scan") {
  const auto r = cli({"scan", "--rmin", "0.5", "--rmax", "5", "--step", "0.05"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 92);
  CHECK(l[0] == "R,E_elec,E_total,A,defect,converged");
  double best = 0.0, best_E = 0.0;
  for (std::size_t i = 1; i < l.size(); ++i) {
    std::istringstream ss(l[i]);
    std::string R, E, Et;
    std::getline(ss, R, ',');
    std::getline(ss, E, ',');
    std::getline(ss, Et, ',');
    if (i == 1 || std::stod(Et) < best_E) best_E = std::stod(Et), best = std::stod(R);
  }
  CHECK(best >= 1.9);
  CHECK(best <= 2.1);

  const auto dir = tmp("scan");
  std::ofstream(dir / "R.txt") << "# panel values\n0.008\n0.012\n\n0.025\n2.0\n";
  const auto out = dir / "curve.csv";
  const auto f = cli({"scan", "--R-list", (dir / "R.txt").string(), "--out", out.string()});
  REQUIRE(f.code == 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(lines(ss.str()).size() == 5);
  const auto m = json::parse(f.out)["manifest"];
  CHECK(m["outputs"][0]["sha256"].get<std::string>().size() == 64);

  CHECK(cli({"scan", "--rmin", "1"}).code == 1);
  CHECK(cli({"scan", "--rmin", "2", "--rmax", "1", "--step", "0.1"}).code == 1);
  CHECK(cli({"scan", "--R-list", "x", "--rmin", "1"}).code == 1);
}

TEST_CASE("density") {
  const auto dir = tmp("density");
  const auto r = cli({"density", "--R", "2.0", "--plane", "xz", "--n", "201", "--out",
                      (dir / "d2").string()});
  REQUIRE(r.code == 0);
  std::ifstream grid(dir / "d2_grid.csv");
  std::stringstream gs;
  gs << grid.rdbuf();
  CHECK(lines(gs.str()).size() == 201 * 201 + 1);

  std::ifstream meta(dir / "d2_meta.json");
  const json m = json::parse(meta);
  const auto maxima = m["axis"]["maxima"].get<std::vector<double>>();
  REQUIRE(maxima.size() == 2);
  CHECK(std::abs(maxima[0] + 1.0) < 0.01);
  CHECK(std::abs(maxima[1] - 1.0) < 0.01);

  REQUIRE(cli({"density", "--R", "0.025", "--out", (dir / "c").string()}).code == 0);
  std::ifstream mc(dir / "c_meta.json");
  const json jc = json::parse(mc)["reference_comparison"];
  CHECK(jc["expected_axis_maxima"].size() == 1);
  CHECK(jc.contains("computed_axis_maxima"));
  CHECK(jc["outcome"] == "discrepancy");

  CHECK(cli({"density", "--R", "2", "--n", "10", "--out", "x"}).code == 1);
  CHECK(cli({"density", "--R", "2", "--plane", "yz", "--out", "x"}).code == 1);
  CHECK(cli({"density", "--R", "2", "--n", "64", "--out", "/proc/h2ion/x"}).code == 3);
}

TEST_CASE("figure1") {
  const auto dir = tmp("fig");
  const auto r = cli({"figure1", "--outdir", dir.string()});
  REQUIRE(r.code == 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.is_regular_file();
  CHECK(files == 18);
  std::ifstream rep(dir / "fig1_report.json");
  const json j = json::parse(rep);
  for (const auto& p : j["panels"]) {
    if (p["R"] == 2.0) CHECK(p["axis_maxima"].size() == 2);
    if (p["R"] == 0.008) CHECK(std::abs(p["anisotropy"].get<double>()) <= 0.01);
  }
}

TEST_CASE("validate") {
  const auto q = cli({"validate", "--quick", "--json"});
  const json j = json::parse(q.out);
  std::set<int> ids;
  for (const auto& c : j["criteria"]) CHECK(ids.insert(c["id"].get<int>()).second);
  CHECK(ids.size() == 10);

  const auto t = cli({"validate", "--quick", "--tamper", "1"});
  CHECK(t.code == 2);
  CHECK(t.out.find("criterion 1 FAIL") != std::string::npos);

  CHECK(cli({"validate", "--quick", "--full"}).code == 1);

  // A fresh build passes the quick subset.
  CHECK(q.code == 0);
}
