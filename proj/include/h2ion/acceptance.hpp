#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace h2ion::acceptance {

enum class Status { pass, fail, skipped };

std::string_view to_string(Status s);

struct CriterionResult {
  int id = 0;
  std::string name;
  Status status = Status::skipped;
  std::string detail;
  double seconds = 0.0;
  nlohmann::json data = nlohmann::json::object();
};

enum class Mode { quick, full };

struct Options {
  Mode mode = Mode::full;
  /// Test hook: the named criterion is reported failed regardless of its
  /// measurements.
  std::optional<int> tamper;
  /// Scratch space for the figure outputs of criteria 7 and 10.
  std::filesystem::path workdir = std::filesystem::temp_directory_path() / "h2ion-acceptance";
};

inline constexpr int kCriteria = 10;

/// Quick mode runs the limits (1, 2), oracle equivalence at R = 2 only (3),
/// the residual suite (4) and the two-term reports (8); the rest are skipped.
std::vector<CriterionResult> run(const Options& opts);

/// One line per criterion: "criterion <id> <PASS|FAIL|SKIP> <name>: <detail>".
std::string format_line(const CriterionResult& r);

nlohmann::json to_json(const std::vector<CriterionResult>& results, Mode mode);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace h2ion::acceptance
