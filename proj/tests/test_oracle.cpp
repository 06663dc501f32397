#include <catch_amalgamated.hpp>

#include <cmath>

#include "h2ion/angular.hpp"
#include "h2ion/errors.hpp"
#include "h2ion/oracle.hpp"
#include "h2ion/quantize.hpp"
#include "h2ion/radial.hpp"

using namespace h2ion;
using Catch::Matchers::WithinAbs;

TEST_CASE("oracle_A in the Legendre limit and at R = 2") {
  CHECK_THAT(oracle_A(0.0, make_config(2.0)), WithinAbs(0.0, 1e-10));

  const auto cfg = make_config(2.0);
  const double E = -1.10263421449495;
  const auto r = oracle_angular(E, cfg);
  CHECK_THAT(r.value, WithinAbs(solve_angular(E, cfg).A, 1e-9));
  CHECK(std::abs(r.halving_change) <= 1e-10);
}

TEST_CASE("oracle_solve limits") {
  CHECK_THAT(oracle_solve(make_config(1e-4)).E_elec, WithinAbs(-2.0, 1e-4));
  const auto far = oracle_solve(make_config(100.0));
  CHECK_THAT(far.E_elec, WithinAbs(-0.5 - 0.01 - 2.25e-8, 1e-8));
  CHECK_THAT(far.E_total, WithinAbs(-0.5, 1e-4));
}

TEST_CASE("oracle reference at R = 2") {
  const auto o = oracle_solve_full(make_config(2.0));
  CHECK_THAT(o.pair.E_elec, WithinAbs(-1.10263421449495, 1e-9));
  CHECK_THAT(o.pair.A, WithinAbs(0.811729584624757, 1e-9));
  CHECK(o.radial.samples.size() >= 101);
  CHECK(o.radial.samples.front().x == 1.0);
  CHECK(o.radial.samples.front().value == 1.0);
}

TEST_CASE("ode_residual") {
  const auto flat = make_config(2.0);
  std::vector<Sample> ones(201);
  for (int i = 0; i < 201; ++i) ones[i] = {-1.0 + i / 100.0, 1.0};
  CHECK(ode_residual(EquationKind::angular, ones, 0.0, 0.0, flat) <= 1e-12);

  const auto o = oracle_solve_full(flat);
  CHECK(ode_residual(EquationKind::angular, o.angular.samples, o.pair.E_elec, o.pair.A, flat) <=
        1e-6);
  CHECK(ode_residual(EquationKind::radial, o.radial.samples, o.pair.E_elec, o.pair.A, flat) <=
        1e-6);

  auto bent = o.angular.samples;
  for (auto& s : bent) s.value += 0.01 * s.x * s.x;
  CHECK(ode_residual(EquationKind::angular, bent, o.pair.E_elec, o.pair.A, flat) > 1e-3);

  std::vector<Sample> few(ones.begin(), ones.begin() + 100);
  CHECK_THROWS_AS(ode_residual(EquationKind::angular, few, 0.0, 0.0, flat), TooFewSamples);
}
