#include <catch_amalgamated.hpp>

#include <cmath>

#include "h2ion/angular.hpp"
#include "h2ion/errors.hpp"
#include "h2ion/oracle.hpp"
#include "h2ion/radial.hpp"

using namespace h2ion;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kE2 = -1.10263421449495;
constexpr double kA2 = 0.811729584624757;
}  // namespace

TEST_CASE("Jaffe coefficients start at one") {
  for (double R : {0.3, 2.0, 7.0}) {
    const auto s = jaffe_coeffs(-1.0, 0.4, make_config(R), 64);
    CHECK(s.jaffe_coeffs[0] == 1.0);
  }
}

TEST_CASE("X at xi = 1 has a closed form") {
  const auto s = solve_radial(kE2, kA2, make_config(2.0), 20.0);
  CHECK_THAT(eval_X(s, 1.0), WithinRel(std::exp(-s.p) * std::pow(2.0, s.sigma), 1e-14));
}

TEST_CASE("radial series satisfies the xi equation at the ground pair") {
  const auto cfg = make_config(2.0);
  const auto s = solve_radial(kE2, kA2, cfg, 20.0);
  CHECK(radial_series_residual(s, cfg, {1.1, 2.0, 5.0}) <= 1e-8);
}

TEST_CASE("ground X is positive and decays") {
  const auto s = solve_radial(kE2, kA2, make_config(2.0), 20.0);
  double prev = eval_X(s, 3.0);
  for (double xi = 1.0; xi <= 20.0; xi += 0.25) CHECK(eval_X(s, xi) > 0.0);
  for (double xi = 3.25; xi <= 20.0; xi += 0.25) {
    const double x = eval_X(s, xi);
    CHECK(x < prev);
    prev = x;
  }
  CHECK(eval_X(s, 10.0) / eval_X(s, 2.0) < 1e-3);

  // X e^{p xi} levels off.
  const double a = eval_X(s, 15.0) * std::exp(s.p * 15.0);
  const double b = eval_X(s, 20.0) * std::exp(s.p * 20.0);
  CHECK(std::abs(a - b) / b < 0.1);
}

TEST_CASE("X agrees with the shooting oracle") {
  const auto cfg = make_config(2.0);
  const auto s = solve_radial(kE2, kA2, cfg, 20.0);
  const auto o = radial_shooting(kE2, kA2, cfg);
  const double x1 = eval_X(s, 1.0);
  for (std::size_t i : {std::size_t{50}, std::size_t{200}, std::size_t{700}}) {
    const auto& smp = o.samples[i];
    CHECK_THAT(eval_X(s, smp.x) / x1, WithinRel(smp.value, 1e-7));
  }
}

TEST_CASE("continued-fraction residual") {
  const auto cfg = make_config(2.0);
  CHECK(std::abs(radial_residual(kE2, kA2, cfg)) <= 1e-10);
  CHECK(std::abs(radial_residual(kE2 + 0.1, kA2, cfg)) > 1e-4);

  for (int i = 0; i < 50; ++i)
    for (int j = 0; j < 50; ++j) {
      const double E = kE2 - 0.05 + 0.1 * i / 49.0;
      const double A = kA2 - 0.05 + 0.1 * j / 49.0;
      CHECK(std::isfinite(radial_residual(E, A, cfg)));
    }
}

TEST_CASE("radial errors") {
  CHECK_THROWS_AS(radial_residual(0.1, 0.0, make_config(2.0)), NonBoundEnergy);
  CHECK_THROWS_AS(radial_residual(NAN, 0.0, make_config(2.0)), NonFiniteInput);
}
