#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "histoscope/histogram.hpp"
#include "histoscope/plot.hpp"
#include "histoscope/workspace.hpp"

namespace histoscope::cli {

/// Process exit codes. Stable; documented in the README.
enum ExitCode : int {
  kOk = 0,
  kGenericError = 1,
  kUnsupportedFormat = 2,
  kSixteenBitColor = 3,
  kWorkspaceError = 4,  // OverlayLimitExceeded, DepthMismatch
  kBadArguments = 5,
};

enum class OutputKind { StatsJson, StatsCsv, PlotPng, All };

struct CliRequest {
  std::vector<std::filesystem::path> inputs;  // first is the base image
  std::optional<std::pair<std::int64_t, std::int64_t>> range;
  ScaleMode scale = ScaleMode::Linear;
  std::optional<std::int64_t> y_limit;
  OutputKind output = OutputKind::StatsJson;
  /// Report format printed alongside the plot for OutputKind::All.
  bool all_report_csv = false;
  /// Plot destination for PlotPng/All; optional stats destination otherwise
  /// (stdout when empty).
  std::optional<std::filesystem::path> out_path;
  BitDepth csv_depth = BitDepth::k8;
  PlotSpec plot;
};

/// Round to 12 significant digits, the precision of the JSON report.
double round_significant12(double value);

/// Shortest decimal that round-trips the double, used for CSV cells.
std::string full_repr(double value);

std::string stats_json(const WorkspaceState& ws, int indent = 2);
std::string stats_csv(const WorkspaceState& ws);

/// Loads inputs (in parallel), builds the workspace, emits outputs in input
/// order. Diagnostics go to err and always name the offending file.
int run(const CliRequest& request, std::ostream& out, std::ostream& err);

/// argv front end: `stats`, `plot` and `serve` subcommands.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace histoscope::cli
