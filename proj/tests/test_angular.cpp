#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "h2ion/angular.hpp"
#include "h2ion/errors.hpp"
#include "h2ion/oracle.hpp"

using namespace h2ion;
using Catch::Matchers::WithinAbs;

namespace {
// Ground pair at R = 2 from the shooting oracle.
constexpr double kE2 = -1.10263421449495;
constexpr double kA2 = 0.811729584624757;
}  // namespace

TEST_CASE("legendre_A reduces to P0 in the united-atom limit") {
  const auto s = legendre_A(-2.0, make_config(1e-6), 16);
  CHECK_THAT(s.A, WithinAbs(0.0, 1e-9));

  const auto z = solve_angular(0.0, make_config(2.0));
  CHECK(z.A == 0.0);
  CHECK(z.coeffs[0] == 1.0);
  for (std::size_t k = 1; k < z.coeffs.size(); ++k) CHECK(z.coeffs[k] == 0.0);
}

TEST_CASE("legendre_A matches the shooting oracle at R = 2") {
  const auto cfg = make_config(2.0);
  const auto s = solve_angular(kE2, cfg);
  CHECK_THAT(s.A, WithinAbs(kA2, 1e-9));
  CHECK_THAT(s.A, WithinAbs(oracle_A(kE2, cfg), 1e-9));
}

TEST_CASE("eval_Y") {
  AngularSolution p0;
  p0.coeffs = {1.0, 0.0, 0.0};
  CHECK(eval_Y(p0, 0.7) == 1.0);

  const auto cfg = make_config(2.0);
  const auto s = solve_angular(kE2, cfg);
  for (double eta : {0.1, 0.33, 0.5, 0.9, 1.0})
    CHECK_THAT(eval_Y(s, eta), WithinAbs(eval_Y(s, -eta), 1e-12));

  // Oracle samples carry Y(0) = 1.
  const auto o = oracle_angular(kE2, cfg);
  double y05 = NAN;
  for (const auto& smp : o.samples)
    if (std::abs(smp.x - 0.5) < 1e-12) y05 = smp.value;
  REQUIRE(std::isfinite(y05));
  CHECK_THAT(eval_Y(s, 0.5) / eval_Y(s, 0.0), WithinAbs(y05, 1e-8));
  CHECK_THAT(y05, WithinAbs(1.10441901025289, 1e-9));
}

TEST_CASE("angular series residual is at round-off") {
  const auto s = solve_angular(kE2, make_config(2.0));
  std::vector<double> etas;
  for (int i = 0; i <= 40; ++i) etas.push_back(-1.0 + i / 20.0);
  CHECK(angular_series_residual(s, etas) <= 1e-8);
}

TEST_CASE("ansatz series") {
  const auto flat = make_config(2.0);
  for (auto b : {Branch::plus, Branch::minus}) {
    const auto s = ansatz_series(0.0, 0.0, flat, b, 32);
    CHECK(s.coeffs[0] == 1.0);
    for (std::size_t k = 1; k < s.coeffs.size(); ++k) CHECK(s.coeffs[k] == 0.0);
  }
  CHECK_THROWS_AS(ansatz_series(-1.0, -0.1, flat, Branch::plus, 32), ImaginaryRoot);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uE(-2.0, -0.5), uA(0.0, 5.0), uR(0.05, 5.0);
  for (int t = 0; t < 20; ++t) {
    const double E = uE(rng), A = uA(rng);
    const auto cfg = make_config(uR(rng));
    const auto g1 = ansatz_series(E, A, cfg, Branch::plus, 48);
    const auto g2 = ansatz_series(E, A, cfg, Branch::minus, 48);
    for (std::size_t k = 0; k < g1.coeffs.size(); ++k)
      CHECK(g2.coeffs[k] == (k % 2 ? -g1.coeffs[k] : g1.coeffs[k]));
  }

  const auto g = ansatz_series(kE2, kA2, flat, Branch::plus, 400);
  for (double eta : {0.1, 0.5, 0.9}) CHECK(ansatz_ode_residual(g, kE2, kA2, flat, eta) <= 1e-8);
}

TEST_CASE("two-term fit") {
  const auto flat = make_config(2.0);
  const auto c = fit_two_term(solve_angular(0.0, flat), flat);
  CHECK(c.D1 == 0.5);
  CHECK(c.D2 == 0.5);
  CHECK(c.assembly_residual <= 1e-12);

  for (double R : {0.025, 2.0}) {
    const auto cfg = make_config(R);
    const double E = R == 2.0 ? kE2 : -1.99980003;
    const auto ref = solve_angular(E, cfg);
    const auto d = fit_two_term(ref, cfg);
    CHECK(std::isfinite(d.D1));
    CHECK(std::isfinite(d.D2));
    CHECK(std::isfinite(d.assembly_residual));
    CHECK(std::isfinite(d.eta0_defect));
    for (double eta : {0.2, 0.6, 0.95})
      CHECK_THAT(eval_two_term(d, eta), WithinAbs(eval_two_term(d, -eta), 1e-12));
  }
}

TEST_CASE("termination check") {
  const auto t0 = termination_check(0.0, 0.0, make_config(2.0), 64, 1e-12);
  CHECK(t0.terminates);
  REQUIRE(t0.degree);
  CHECK(*t0.degree == 0);

  const auto off = termination_check(-1.3, 1.7, make_config(1.1), 128, 1e-12);
  CHECK_FALSE(off.terminates);
  CHECK_FALSE(off.evidence.empty());

  // The ground pair does not yield a polynomial g1.
  const auto t2 = termination_check(kE2, kA2, make_config(2.0), 512, 1e-12);
  CHECK_FALSE(t2.terminates);
  CHECK_THROWS_AS(termination_check(kE2, kA2, make_config(2.0), 16, 1e-12), InvalidConfig);
}
