#pragma once

#include "ftc/simulator.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace ftc {

/// CSV columns, in output order. This order is part of the file contract.
const std::vector<std::string>& csv_columns();

/// One row's values in csv_columns() order.
std::vector<double> row_values(const SimRow& row);

/// Streams SimRows as CSV. Numbers use a fixed printf format so identical
/// runs give identical bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void write_header();
  void write(const SimRow& row);
  /// Trailing comment line marking an aborted run.
  void mark_truncated(double t, const std::string& reason);

 private:
  std::ostream& out_;
};

/// Extra context printed in the provenance block.
struct SummaryContext {
  std::string source;   ///< scenario file or preset name
  std::string csv_file;
  std::string status = "completed";  ///< completed | diverged
  std::string abort_reason;
};

/// Human-readable structured text (one "key: value" per line, indented lists).
std::string summary_text(const RunSummary& summary, const Scenario& scenario,
                         const SummaryContext& ctx = {});

/// Same content as JSON.
std::string summary_json(const RunSummary& summary, const Scenario& scenario,
                         const SummaryContext& ctx = {});

/// One-word verdict for a fault outcome: ok, undetected, unidentified, misidentified,
/// not-reconverged or estimate-off.
std::string fault_verdict(const FaultOutcome& outcome, double tolerance);

}  // namespace ftc
