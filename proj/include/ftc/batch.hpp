#pragma once

#include "ftc/record_io.hpp"
#include "ftc/scenario_io.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ftc {

enum class RunStatus { Ok, ValidationFailed, Diverged, IoFailed };

const char* status_name(RunStatus s);

/// Process exit code for a status: 0, 2, 3 or 4.
int exit_code(RunStatus s);

struct RunOutcome {
  std::string label;  ///< as given on the command line
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::optional<RunSummary> summary;
  std::optional<Scenario> scenario;
  std::filesystem::path csv_path;
  std::filesystem::path summary_path;
};

struct RunOptions {
  std::vector<std::string> overrides;
  std::optional<int> decimation;
  /// Base name for the output files; defaults to the scenario name.
  std::string stem;
};

/// Runs an already-validated scenario and writes, under `out_dir`:
///   <stem>.csv, <stem>.summary.txt, <stem>.summary.json, <stem>.scenario.json
/// A diverged run keeps its partial CSV with a truncation marker.
RunOutcome run_to_directory(const Scenario& scenario, const std::filesystem::path& out_dir,
                            const std::string& source, const std::string& stem = {});

/// Resolves `arg` (a file path or a preset name), loads it with the options
/// and runs it into `out_dir`.
RunOutcome run_one(const std::string& arg, const std::filesystem::path& out_dir,
                   const RunOptions& opts);

/// Runs every argument, up to `jobs` at a time. Results come back in input
/// order; one failure does not stop the rest. Output stems are de-duplicated.
std::vector<RunOutcome> run_batch(const std::vector<std::string>& args,
                                  const std::filesystem::path& out_dir, const RunOptions& opts,
                                  int jobs = 0);

/// Fixed-width table, one row per outcome.
std::string batch_table(const std::vector<RunOutcome>& outcomes);

// ---- presets ----

/// FTC_PRESET_DIR from the environment, else the directory baked in at build time.
std::filesystem::path preset_dir();

struct PresetInfo {
  std::string name;
  std::string description;
  std::filesystem::path path;
};

/// Every *.json directly under preset_dir(), sorted by name.
std::vector<PresetInfo> list_presets();

/// A path that exists is returned as is; otherwise `arg` is looked up as a
/// preset name (aliases included). nullopt if neither.
std::optional<std::filesystem::path> resolve_scenario(const std::string& arg);

}  // namespace ftc
