#include "h2ion/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "h2ion/errors.hpp"

namespace h2ion {

std::string_view to_string(SignConvention c) {
  return c == SignConvention::attractive ? "attractive" : "as_printed";
}

SignConvention parse_convention(std::string_view name) {
  if (name == "attractive") return SignConvention::attractive;
  if (name == "as_printed") return SignConvention::as_printed;
  throw InvalidConfig("unknown sign convention '" + std::string(name) +
                      "' (expected attractive or as_printed)");
}

void SystemConfig::validate() const {
  if (!std::isfinite(R) || R <= 0.0)
    throw InvalidConfig("internuclear distance R must be finite and > 0, got " +
                        std::to_string(R));
}

SystemConfig make_config(double R, SignConvention c) {
  SystemConfig cfg;
  cfg.R = R;
  cfg.sign_convention = c;
  cfg.validate();
  return cfg;
}

ProlatePoint ProlatePoint::clamped(double xi, double eta, double phi) {
  constexpr double slack = 1e-12;
  if (!(xi >= 1.0 - slack) || !(std::abs(eta) <= 1.0 + slack))
    throw InvalidConfig("prolate point outside xi >= 1, |eta| <= 1");
  return {std::max(xi, 1.0), std::clamp(eta, -1.0, 1.0), phi};
}

ProlateCoordinates to_prolate(double x, double y, double z,
                              const SystemConfig& cfg) {
  const double a = cfg.half_R();
  const double rho2 = x * x + y * y;
  const double r1 = std::sqrt(rho2 + (z + a) * (z + a));
  const double r2 = std::sqrt(rho2 + (z - a) * (z - a));
  if (r1 < kNucleusTolerance || r2 < kNucleusTolerance)
    throw NucleusCoincidence(
        "point coincides with a nucleus; use focus_point() instead");

  double phi = std::atan2(y, x);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (phi >= 2.0 * std::numbers::pi) phi = 0.0;

  ProlateCoordinates out;
  out.r1 = r1;
  out.r2 = r2;
  out.point.xi = std::max((r1 + r2) / cfg.R, 1.0);
  out.point.eta = std::clamp((r1 - r2) / cfg.R, -1.0, 1.0);
  out.point.phi = phi;
  return out;
}

Cartesian to_cartesian(const ProlatePoint& p, const SystemConfig& cfg) {
  const double a = cfg.half_R();
  const double s = std::max(0.0, (p.xi * p.xi - 1.0) * (1.0 - p.eta * p.eta));
  const double rho = a * std::sqrt(s);
  return {rho * std::cos(p.phi), rho * std::sin(p.phi), a * p.xi * p.eta};
}

double volume_weight(const ProlatePoint& p, const SystemConfig& cfg) {
  const double a = cfg.half_R();
  return a * a * a * (p.xi * p.xi - p.eta * p.eta);
}

ProlatePoint focus_point(int nucleus) {
  if (nucleus != 1 && nucleus != 2)
    throw InvalidConfig("nucleus index must be 1 or 2");
  return {1.0, nucleus == 1 ? -1.0 : 1.0, 0.0};
}

}  // namespace h2ion
