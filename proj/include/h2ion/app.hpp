#pragma once

#include <chrono>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "h2ion/density.hpp"
#include "h2ion/errors.hpp"
#include "h2ion/quantize.hpp"

namespace h2ion::app {

using nlohmann::json;

std::string_view version();

/// Raised for any file that cannot be created or written (exit code 3).
class OutputError : public Error {
 public:
  explicit OutputError(const std::string& what) : Error("OutputError", what) {}
};

/// printf-style "%.12g"; NaN and infinities become empty fields.
std::string csv_number(double v);

/// Writes the bytes, creating parent directories. Throws OutputError.
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  json config;
  std::vector<std::filesystem::path> outputs;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
  std::string started_utc;

  RunManifest(std::string command, json config);
  /// Checksums every output and stamps the wall time.
  json finish() const;
};

// JSON views of the library types.
json to_json(const SeparationPair& p);
json to_json(const ConventionReport& r);
json to_json(const TwoTermDecomposition& d);
json to_json(const TerminationReport& r);
json to_json(const CuspResult& c);

/// Fig. 1 panel letters keyed by R; empty when R is not a panel value.
std::string panel_letter(double R);
const std::vector<double>& figure1_R();
/// half_width = max(4R, 0.08) below R = 1, 4 bohr otherwise.
double figure1_half_width(double R);
inline constexpr int kFigure1Points = 401;

struct DensityRequest {
  double R = 2.0;
  Plane plane = Plane::xz;
  double half_width = 4.0;
  int n = 201;
  std::filesystem::path prefix;
  SignConvention convention = SignConvention::attractive;
};

struct DensityOutput {
  std::vector<std::filesystem::path> files;
  json meta;
};

/// Axis sample count giving a step no larger than R/40 (at least 2001).
int axis_points(double R);

/// Writes <prefix>_grid.csv, _axis.csv, _meta.json and _plot.txt.
DensityOutput write_density(const DensityRequest& req);

struct Figure1Output {
  std::vector<std::filesystem::path> files;
  json report;
};

Figure1Output write_figure1(const std::filesystem::path& outdir);

std::string scan_csv(const std::vector<CurveRow>& rows);

/// Parses R values from a list file: one per line, '#' starts a comment.
std::vector<double> read_R_list(const std::filesystem::path& path);

/// Entry point of the h2ion tool. Exit codes: 0 ok, 1 argument error,
/// 2 solver error or failed validation, 3 unwritable output.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace h2ion::app
