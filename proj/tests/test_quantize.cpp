#include <catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>

#include "h2ion/errors.hpp"
#include "h2ion/quantize.hpp"

using namespace h2ion;
using Catch::Matchers::WithinAbs;

namespace {
// Ground pairs from the shooting oracle.
struct Frozen {
  double R, E, A;
};
constexpr Frozen kOracle[] = {
    {0.5, -1.73498799997357, 0.0729927345331546},
    {1.0, -1.45178631337845, 0.249946240611413},
    {2.0, -1.10263421449495, 0.811729584624757},
    {4.0, -0.796084883712938, 2.79958875947142},
};
}  // namespace

TEST_CASE("ground pairs match the frozen oracle values") {
  for (const auto& f : kOracle) {
    const auto p = solve_ground(make_config(f.R));
    CHECK_THAT(p.E_elec, WithinAbs(f.E, 1e-8));
    CHECK_THAT(p.A, WithinAbs(f.A, 1e-8));
    CHECK_THAT(p.E_total, WithinAbs(p.E_elec + 1.0 / f.R, 1e-15));
    CHECK(p.defect <= 1e-10);
    CHECK(p.convention == SignConvention::attractive);
  }
  CHECK_THAT(solve_ground(make_config(2.0)).E_total, WithinAbs(-0.6026, 1e-4));
}

TEST_CASE("united-atom limit") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = solve_ground(make_config(1e-4));
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK_THAT(p.E_elec, WithinAbs(-2.0, 1e-3));
  CHECK_THAT(p.A, WithinAbs(0.0, 1e-3));
  CHECK(dt < 1.0);
}

TEST_CASE("separated-atom limit follows -1/2 - 1/R") {
  // Large-R expansion of the ground energy: -1/2 - 1/R - 9/(4 R^4).
  const double R = 100.0;
  const auto p = solve_ground(make_config(R));
  CHECK_THAT(p.E_elec, WithinAbs(-0.5 - 1.0 / R - 2.25 / std::pow(R, 4), 1e-9));
  CHECK_THAT(p.E_total, WithinAbs(-0.5, 1e-6));
}

TEST_CASE("energy window and scan") {
  const auto [lo, hi] = energy_window(2.0);
  CHECK(lo == -2.2);
  CHECK(hi == -0.45);
  CHECK_THAT(energy_window(100.0).first, WithinAbs(-2.01, 1e-15));

  const auto scan = energy_scan(make_config(2.0), 40);
  CHECK(scan.size() == 40);
  for (const auto& s : scan) CHECK(std::abs(s.F) <= 1.0 + 1e-12);
}

TEST_CASE("scan_curve") {
  SystemConfig tmpl;
  const auto one = scan_curve({2.0}, tmpl);
  REQUIRE(one.size() == 1);
  REQUIRE(one[0].pair);
  CHECK(one[0].pair->E_elec == solve_ground(make_config(2.0)).E_elec);

  const auto fig = scan_curve({0.008, 0.012, 0.025, 2.0}, tmpl);
  REQUIRE(fig.size() == 4);
  for (const auto& r : fig) {
    REQUIRE(r.pair);
    CHECK(r.pair->defect <= 1e-10);
  }

  std::vector<double> Rs;
  for (int i = 0; i <= 90; ++i) Rs.push_back(std::round((0.5 + 0.05 * i) * 1e12) / 1e12);
  const auto dense = scan_curve(Rs, tmpl);
  REQUIRE(dense.size() == 91);
  const auto best = std::min_element(dense.begin(), dense.end(), [](const auto& a, const auto& b) {
    return a.pair->E_total < b.pair->E_total;
  });
  CHECK(best->R >= 1.9);
  CHECK(best->R <= 2.1);
  // Single minimum: E_total falls then rises.
  for (auto it = dense.begin() + 1; it != dense.end(); ++it) {
    if (it <= best) CHECK(it->pair->E_total < (it - 1)->pair->E_total);
    else CHECK(it->pair->E_total > (it - 1)->pair->E_total);
  }

  CHECK_THROWS_AS(scan_curve({2.0, 1.0}, tmpl), InvalidConfig);
  CHECK_THROWS_AS(scan_curve({-1.0, 1.0}, tmpl), InvalidConfig);
}

TEST_CASE("convention check") {
  const auto rep = convention_check(make_config(2.0));
  CHECK(rep.active_default == SignConvention::attractive);
  CHECK(rep.cases.size() == 4);
  REQUIRE_FALSE(rep.satisfies_united_atom.empty());
  CHECK(rep.satisfies_united_atom.front() == SignConvention::attractive);
  for (const auto& c : rep.cases)
    if (c.convention == SignConvention::as_printed) CHECK_FALSE(c.detail.empty());
  CHECK_FALSE(rep.as_printed_brackets_bound_root);

  CHECK_THROWS_AS(solve_ground(make_config(2.0, SignConvention::as_printed)), BracketingFailed);
}

TEST_CASE("solver option validation") {
  SolverOptions o;
  o.energy_tol = 1e-13;
  CHECK_THROWS_AS(solve_ground(make_config(2.0), o), InvalidConfig);
}
