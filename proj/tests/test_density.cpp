#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "h2ion/density.hpp"
#include "h2ion/errors.hpp"
#include "h2ion/oracle.hpp"

using namespace h2ion;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const WaveFunction& wf_at(double R) {
  static std::map<double, WaveFunction> cache;
  auto it = cache.find(R);
  if (it == cache.end()) it = cache.emplace(R, make_wavefunction(make_config(R))).first;
  return it->second;
}
}  // namespace

TEST_CASE("normalization") {
  for (double R : {0.008, 0.012, 0.025, 2.0}) {
    const auto& wf = wf_at(R);
    CHECK_THAT(norm_integral(wf), WithinAbs(1.0, 1e-8));
    QuadratureOrders twice;
    twice.eta *= 2;
    twice.xi_panel *= 2;
    CHECK_THAT(norm_integral(wf, twice), WithinAbs(norm_integral(wf), 1e-9));
  }
}

TEST_CASE("Monte Carlo norm at R = 2") {
  const auto mc = monte_carlo_norm(wf_at(2.0), 10'000'000);
  CHECK(mc.seed == 20240611);
  CHECK(mc.deviation_sigmas <= 3.0);
}

TEST_CASE("density symmetries and positivity") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double R : {0.008, 2.0}) {
    const auto& wf = wf_at(R);
    CHECK(density_at(wf, 0, 0, 0) > 0.0);
    for (int k = 0; k < 100; ++k) {
      const double x = u(rng), y = u(rng), z = u(rng);
      const double r = density_at(wf, x, y, z);
      CHECK_THAT(density_at(wf, x, y, -z), WithinRel(r, 1e-10));
      CHECK_THAT(density_at(wf, std::hypot(x, y), 0.0, z), WithinRel(r, 1e-10));
    }
  }
  // On a nucleus the value at the focus is returned.
  CHECK(density_at(wf_at(2.0), 0, 0, 1.0) == density_at(wf_at(2.0), ProlatePoint{1.0, 1.0, 0.0}));
}

TEST_CASE("density agrees with the oracle pipeline") {
  const auto cfg = make_config(2.0);
  const auto swf = sampled_wavefunction(oracle_solve_full(cfg), cfg);
  const auto& wf = wf_at(2.0);
  for (auto [x, z] : {std::pair{0.0, 1.0 - 1e-7}, std::pair{0.0, 0.0}, std::pair{0.8, -0.4},
                      std::pair{2.0, 1.5}})
    CHECK_THAT(density_at(swf, x, 0.0, z), WithinRel(density_at(wf, x, 0.0, z), 1e-6));
}

TEST_CASE("density slice") {
  const auto g = density_slice(wf_at(2.0), Plane::xz, 4.0, 201);
  REQUIRE(g.values.size() == 201u * 201u);
  CHECK(g.u(100) == 0.0);
  CHECK(g.u(0) == -g.u(200));

  // The two largest values sit on the nuclei.
  std::vector<std::size_t> idx(g.values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + 2, idx.end(),
                    [&](auto a, auto b) { return g.values[a] > g.values[b]; });
  for (int k = 0; k < 2; ++k) {
    const int i = int(idx[k] % 201), j = int(idx[k] / 201);
    CHECK(std::abs(g.u(i)) <= g.spacing);
    CHECK(std::abs(std::abs(g.v(j)) - 1.0) <= g.spacing);
  }
  CHECK(enclosed_charge(g) <= 1.0 + 1e-2);
  CHECK(enclosed_charge(g) > 0.99);

  CHECK_THROWS_AS(density_slice(wf_at(2.0), Plane::xz, 4.0, 32), InvalidConfig);
  CHECK(parse_plane("xy") == Plane::xy);
  CHECK_THROWS_AS(parse_plane("yz"), InvalidConfig);
}

TEST_CASE("axis report") {
  const auto a2 = axis_report(wf_at(2.0), 2001);
  REQUIRE(a2.maxima.size() == 2);
  CHECK(std::abs(a2.maxima[0] + 1.0) <= a2.step);
  CHECK(std::abs(a2.maxima[1] - 1.0) <= a2.step);

  const auto a0 = axis_report(wf_at(0.008), 2001);
  CHECK(std::abs(a0.anisotropy) <= 0.01);
  CHECK(sphere_variation(wf_at(0.008), 0.05) < 0.05);

  CHECK(strict_maxima({0, 1, 1, 1, 0, 2, 0}) == std::vector<std::size_t>{2, 5});
  CHECK(strict_maxima({3, 2, 1}).empty());
}

TEST_CASE("nuclear cusp") {
  for (double R : {0.5, 2.0}) {
    const auto c1 = cusp_diagnostic(wf_at(R), 1);
    const auto c2 = cusp_diagnostic(wf_at(R), 2);
    CHECK_THAT(c1.kappa, WithinAbs(-1.0, 1e-2));
    CHECK_THAT(c1.kappa, WithinAbs(c2.kappa, 1e-6));
  }
  const auto small = cusp_diagnostic(wf_at(0.008), 1);
  CHECK_THAT(small.kappa, WithinAbs(-1.0, 5e-2));
  CHECK_THROWS_AS(cusp_diagnostic(wf_at(2.0), 1, {1e-5, 2e-4, 3e-4, 4e-4}), RadiiOutOfRange);
}

TEST_CASE("term amplitudes") {
  const auto t = term_amplitudes({0.008, 0.012, 0.025, 2.0}, SystemConfig{});
  REQUIRE(t.rows.size() == 4);
  for (const auto& r : t.rows) {
    if (!r.flag.empty()) continue;
    REQUIRE(r.fit);
    CHECK(std::isfinite(r.fit->D1));
    CHECK(std::isfinite(r.fit->assembly_residual));
    CHECK(std::isfinite(r.fit->eta0_defect));
  }
  CHECK((t.ratio_trend == "increasing" || t.ratio_trend == "decreasing" || t.ratio_trend == "none"));
}
