#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ragmon {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
};

// predictions and truths are parallel arrays of {0,1}; attack (1) is the
// positive class.
ConfusionMatrix confusion(std::span<const int> predictions,
                          std::span<const int> truths);

struct MetricsReport {
  ConfusionMatrix cm;
  std::uint64_t unclassified = 0;
  // A metric whose denominator is zero stays unset rather than pretending
  // to be 0 or 1.
  std::optional<double> accuracy;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> auc;
  // Set when the ROC scores were bare 0/1 predictions instead of graded
  // scores; such an AUC understates a threshold sweep.
  bool auc_from_binary_scores = false;
  double mean_request_latency_s = 0.0;
};

MetricsReport metrics(const ConfusionMatrix& cm);

// Mann-Whitney AUC: P(score_pos > score_neg) + 0.5 * P(equal), computed by
// rank summation with tie-halving. Requires both classes present.
double roc_auc(std::span<const double> scores, std::span<const int> truths);

struct RunLogRow {
  double timestamp_s = 0.0;
  std::string port;
  std::string features_digest;  // empty for rows without a classification
  int prediction = 0;           // -1 when unclassified
  int truth = 0;
  double latency_s = 0.0;
  std::uint64_t packet_in_count = 0;
  double load_proxy = 0.0;
  std::string mitigation_action;  // none | install_drop | remove_drop
};

// metrics file: one "key=value" per line, fixed key order, undefined
// metrics rendered as "undefined". Both writers are byte-deterministic.
void write_metrics_file(const MetricsReport& report,
                        const std::filesystem::path& path);
MetricsReport read_metrics_file(const std::filesystem::path& path);

void write_run_log(std::span<const RunLogRow> rows,
                   const std::filesystem::path& path);
// Parse errors carry the 1-based line number.
std::vector<RunLogRow> read_run_log(const std::filesystem::path& path);

}  // namespace ragmon
