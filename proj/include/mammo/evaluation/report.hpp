#pragma once

#include "mammo/evaluation/protocol.hpp"
#include "mammo/evaluation/stats.hpp"

#include <filesystem>
#include <optional>
#include <string_view>

namespace mammo {

enum class ReportFormat { Csv, Json };
std::optional<ReportFormat> parse_report_format(std::string_view name);

struct ReportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CSV: `# key=value` metadata lines, the column line
/// config_id,extractor,family,classifier,kernel,seed,weight_seed,fold,
/// train_acc,test_acc,train_sec,test_sec (plus confusion and error
/// columns), one row per run, then `# aggregate,...` lines.
/// JSON: version, configuration, seeds, settings, a "results" section with
/// accuracies and confusions and a separate "timing" section.
void emit_report(const RunReport &report, const std::filesystem::path &path, ReportFormat format);
std::string report_to_string(const RunReport &report, ReportFormat format);

/// Reads either format (JSON is recognised by a leading '{').
RunReport load_report(const std::filesystem::path &path);
RunReport parse_report(const std::string &text);

/// The aggregate block stored in an emitted report (either format), for
/// checking it against RunReport::aggregates() of the parsed runs.
Aggregates embedded_aggregates(const std::string &text);

struct RatioRow {
  std::string config_id;
  double mean_test_accuracy = 0.0;
  double mean_train_seconds = 0.0;
  double ratio = 0.0; ///< percent accuracy per training second
};

struct RatioTable {
  std::vector<RatioRow> rows;         ///< sorted by ratio, descending
  std::vector<std::string> excluded;  ///< near-chance configurations
};

/// Configurations whose mean test accuracy is below 55% are left out.
/// Throws ReportError on a zero mean training time.
RatioTable ratio_report(const std::vector<RunReport> &reports);
inline constexpr double kNearChanceAccuracy = 55.0;

struct PairwiseTest {
  std::string first, second;
  TTestResult result;
};

/// t-tests between every pair of reports' test accuracies. Throws
/// ReportError on mismatched class sets or fewer than two reports.
std::vector<PairwiseTest> pairwise_tests(const std::vector<RunReport> &reports, bool welch = false);

} // namespace mammo
