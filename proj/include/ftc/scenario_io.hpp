#pragma once

#include "ftc/simulator.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ftc {

/// One problem found while loading a scenario file.
struct ValidationIssue {
  enum class Kind {
    Parse,        ///< malformed JSON
    Schema,       ///< wrong type or shape
    UnknownKey,   ///< key not part of the schema
    Range,        ///< value outside its allowed range
    Assumption,   ///< fault schedule violates a modelling assumption
    Rank,         ///< thruster geometry gives a rank-deficient allocation
    Override,     ///< --override did not resolve to a schema key
    Io,           ///< file missing or unreadable
  };
  Kind kind = Kind::Schema;
  std::string path;  ///< JSON path such as "fdi.T_s"; empty for file-level issues
  int line = 0;      ///< 1-based; 0 when unknown
  std::string message;
};

const char* kind_name(ValidationIssue::Kind kind);

struct ValidationReport {
  std::string file;
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
  bool io_failure() const;
  /// One "file:line: [kind] path: message" line per issue.
  std::string format() const;
};

/// Thrown by load_scenario; carries the full report.
class ScenarioError : public ValidationError {
 public:
  explicit ScenarioError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

/// Result of parsing plus validation. `scenario` is meaningful only when
/// `report.ok()`.
struct LoadResult {
  Scenario scenario;
  ValidationReport report;
};

/// Parses, applies `overrides` ("key=value", key either a dotted path such as
/// "fdi.T_s" or a leaf name that is unique in the schema such as "T_s"),
/// and validates. Never throws for bad input; everything lands in the report.
LoadResult check_scenario_file(const std::filesystem::path& path,
                               const std::vector<std::string>& overrides = {});

/// Same, from an in-memory document. Relative vehicle paths resolve against
/// `base_dir`.
LoadResult check_scenario_text(const std::string& text, const std::filesystem::path& base_dir,
                               const std::vector<std::string>& overrides = {},
                               const std::string& label = "<string>");

/// check_scenario_file, throwing ScenarioError when the report is not clean.
Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides = {});

/// Full, self-contained JSON rendering (vehicle inlined, every key present).
std::string scenario_to_json(const Scenario& scenario, int indent = 2);

}  // namespace ftc
