#include <catch_amalgamated.hpp>

#include <cmath>

#include "h2ion/errors.hpp"
#include "h2ion/geometry.hpp"
#include "h2ion/quadrature.hpp"

using namespace h2ion;
using Catch::Matchers::WithinAbs;

TEST_CASE("to_prolate at the midpoint and on the bisector plane") {
  const auto cfg = make_config(2.0);
  const auto mid = to_prolate(0, 0, 0, cfg);
  CHECK_THAT(mid.point.xi, WithinAbs(1.0, 1e-15));
  CHECK_THAT(mid.point.eta, WithinAbs(0.0, 1e-15));
  CHECK_THAT(mid.r1, WithinAbs(1.0, 1e-15));
  CHECK_THAT(mid.r2, WithinAbs(1.0, 1e-15));

  const auto side = to_prolate(1, 0, 0, cfg);
  CHECK_THAT(side.point.xi, WithinAbs(std::sqrt(2.0), 1e-15));
  CHECK_THAT(side.point.eta, WithinAbs(0.0, 1e-15));
  CHECK_THAT(side.point.phi, WithinAbs(0.0, 1e-15));
}

TEST_CASE("nucleus 1 sits at negative z") {
  const auto c = to_prolate(0, 0, -0.5, make_config(2.0));
  CHECK(c.r1 < c.r2);
  CHECK(c.point.eta < 0.0);
}

TEST_CASE("round trip cartesian -> prolate -> cartesian") {
  const auto cfg = make_config(2.0);
  const auto back = to_cartesian(to_prolate(0, 0, 0.9, cfg).point, cfg);
  CHECK_THAT(back.x, WithinAbs(0.0, 1e-12));
  CHECK_THAT(back.y, WithinAbs(0.0, 1e-12));
  CHECK_THAT(back.z, WithinAbs(0.9, 1e-12));

  for (double R : {0.008, 0.5, 3.0}) {
    const auto c = make_config(R);
    for (auto [x, y, z] : {std::array{0.3, -0.2, 0.7}, std::array{-1.5, 0.1, -0.01},
                           std::array{0.0, 2.0, 0.0}}) {
      const auto b = to_cartesian(to_prolate(x, y, z, c).point, c);
      CHECK_THAT(b.x, WithinAbs(x, 1e-12));
      CHECK_THAT(b.y, WithinAbs(y, 1e-12));
      CHECK_THAT(b.z, WithinAbs(z, 1e-12));
    }
  }
}

TEST_CASE("to_cartesian at the foci and on the bisector") {
  const auto cfg = make_config(2.0);
  const auto n2 = to_cartesian({1.0, 1.0, 0.0}, cfg);
  CHECK_THAT(n2.z, WithinAbs(1.0, 1e-15));
  const auto n1 = to_cartesian({1.0, -1.0, 0.0}, cfg);
  CHECK_THAT(n1.z, WithinAbs(-1.0, 1e-15));
  const auto p = to_cartesian({2.0, 0.0, std::acos(-1.0) / 2}, cfg);
  CHECK_THAT(p.x, WithinAbs(0.0, 1e-15));
  CHECK_THAT(p.y, WithinAbs(std::sqrt(3.0), 1e-15));
  CHECK_THAT(p.z, WithinAbs(0.0, 1e-15));
}

TEST_CASE("volume weight") {
  CHECK(volume_weight({1.0, 1.0, 0.0}, make_config(0.37)) == 0.0);
  CHECK_THAT(volume_weight({1.0, 0.0, 0.0}, make_config(2.0)), WithinAbs(1.0, 1e-15));
  CHECK_THAT(volume_weight({2.0, 0.5, 0.0}, make_config(2.0)), WithinAbs(3.75, 1e-15));
}

TEST_CASE("geometry errors") {
  CHECK_THROWS_AS(make_config(0.0), InvalidConfig);
  CHECK_THROWS_AS(make_config(-1.0), InvalidConfig);
  CHECK_THROWS_AS(make_config(NAN), InvalidConfig);
  CHECK_THROWS_AS(to_prolate(0, 0, 1.0, make_config(2.0)), NucleusCoincidence);
  CHECK_THROWS_AS(ProlatePoint::clamped(0.99, 0.0), InvalidConfig);
  CHECK(ProlatePoint::clamped(1.0 - 1e-13, 1.0 + 1e-13).xi == 1.0);
  CHECK_THROWS_AS(parse_convention("repulsive"), InvalidConfig);
  CHECK(parse_convention("as_printed") == SignConvention::as_printed);
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto g = gauss_legendre(12);
  double s = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 22);
  CHECK_THAT(s, WithinAbs(2.0 / 23.0, 1e-15));
  const auto m = g.mapped(1.0, 3.0);
  double t = 0.0;
  for (std::size_t i = 0; i < m.nodes.size(); ++i) t += m.weights[i] * m.nodes[i] * m.nodes[i];
  CHECK_THAT(t, WithinAbs(26.0 / 3.0, 1e-13));
}
