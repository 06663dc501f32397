#pragma once

#include <string>
#include <string_view>

namespace h2ion {

/// Sign of the linear 2R*xi term in the xi equation.
///  attractive: +2R*xi, the electron-nucleus attraction (default).
///  as_printed: -2R*xi.
enum class SignConvention { attractive, as_printed };

enum class State { ground_gerade };

std::string_view to_string(SignConvention c);
SignConvention parse_convention(std::string_view name);

/// Fixed nuclei with unit charges on the z axis, nucleus 1 at z = -R/2 and
/// nucleus 2 at z = +R/2.
struct SystemConfig {
  double R = 2.0;  // bohr
  SignConvention sign_convention = SignConvention::attractive;
  State state = State::ground_gerade;

  /// +1 for attractive, -1 for as_printed.
  double sign() const noexcept {
    return sign_convention == SignConvention::attractive ? 1.0 : -1.0;
  }
  double half_R() const noexcept { return 0.5 * R; }

  /// Throws InvalidConfig unless R is finite and positive.
  void validate() const;
};

SystemConfig make_config(double R,
                         SignConvention c = SignConvention::attractive);

/// Point (xi, eta, phi) in prolate spheroidal coordinates.
struct ProlatePoint {
  double xi = 1.0;
  double eta = 0.0;
  double phi = 0.0;

  /// Clamps xi >= 1 and |eta| <= 1 when the violation is within 1e-12;
  /// larger violations throw InvalidConfig.
  static ProlatePoint clamped(double xi, double eta, double phi = 0.0);
};

struct Cartesian {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct ProlateCoordinates {
  ProlatePoint point;
  double r1 = 0.0;  // distance to nucleus 1 (z = -R/2)
  double r2 = 0.0;  // distance to nucleus 2 (z = +R/2)
};

/// Distance below which a point counts as sitting on a nucleus.
inline constexpr double kNucleusTolerance = 1e-14;

/// xi = (r1 + r2)/R, eta = (r1 - r2)/R, phi = atan2(y, x) in [0, 2pi).
/// Throws NucleusCoincidence within kNucleusTolerance of either nucleus.
ProlateCoordinates to_prolate(double x, double y, double z,
                              const SystemConfig& cfg);

Cartesian to_cartesian(const ProlatePoint& p, const SystemConfig& cfg);

/// (R/2)^3 (xi^2 - eta^2); the volume element is weight * dxi deta dphi.
double volume_weight(const ProlatePoint& p, const SystemConfig& cfg);

/// Exact focal points: nucleus 1 is (xi=1, eta=-1), nucleus 2 (xi=1, eta=+1).
ProlatePoint focus_point(int nucleus);

}  // namespace h2ion
