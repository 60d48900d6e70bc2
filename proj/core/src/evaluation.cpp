#include "ragmon/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ragmon {

ConfusionMatrix confusion(std::span<const int> predictions,
                          std::span<const int> truths) {
  if (predictions.size() != truths.size()) {
    throw std::invalid_argument("confusion: size mismatch");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const int p = predictions[i];
    const int t = truths[i];
    if ((p != 0 && p != 1) || (t != 0 && t != 1)) {
      throw std::invalid_argument("confusion: labels must be 0 or 1");
    }
    if (t == 1) {
      p == 1 ? ++cm.tp : ++cm.fn;
    } else {
      p == 1 ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  MetricsReport report;
  report.cm = cm;
  const auto den = [](std::uint64_t d) { return d != 0; };
  if (den(cm.total())) {
    report.accuracy =
        static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  }
  if (den(cm.tp + cm.fp)) {
    report.precision =
        static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
  }
  if (den(cm.tp + cm.fn)) {
    report.recall =
        static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  }
  if (report.precision && report.recall &&
      *report.precision + *report.recall > 0.0) {
    report.f1 = 2.0 * *report.precision * *report.recall /
                (*report.precision + *report.recall);
  }
  return report;
}

double roc_auc(std::span<const double> scores, std::span<const int> truths) {
  if (scores.size() != truths.size()) {
    throw std::invalid_argument("roc_auc: size mismatch");
  }
  std::size_t positives = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    if (truths[i] != 0 && truths[i] != 1) {
      throw std::invalid_argument("roc_auc: labels must be 0 or 1");
    }
    positives += static_cast<std::size_t>(truths[i]);
  }
  const std::size_t negatives = truths.size() - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("roc_auc: both classes must be present");
  }

  // Rank-sum formulation; tied scores share their average rank, which
  // half-counts tied positive/negative pairs.
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = (static_cast<double>(i + 1) +
                             static_cast<double>(j)) /
                            2.0;  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (truths[order[k]] == 1) positive_rank_sum += avg_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double n = static_cast<double>(negatives);
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

namespace {

std::string metric_value(const std::optional<double>& value) {
  if (!value) return "undefined";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9f", *value);
  return buf;
}

std::string fixed(double value, const char* fmt = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

}  // namespace

void write_metrics_file(const MetricsReport& report,
                        const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "samples=" << report.cm.total() << "\n";
  out << "unclassified=" << report.unclassified << "\n";
  out << "tp=" << report.cm.tp << "\n";
  out << "tn=" << report.cm.tn << "\n";
  out << "fp=" << report.cm.fp << "\n";
  out << "fn=" << report.cm.fn << "\n";
  out << "accuracy=" << metric_value(report.accuracy) << "\n";
  out << "precision=" << metric_value(report.precision) << "\n";
  out << "recall=" << metric_value(report.recall) << "\n";
  out << "f1=" << metric_value(report.f1) << "\n";
  out << "auc=" << metric_value(report.auc) << "\n";
  out << "auc_from_binary_scores=" << (report.auc_from_binary_scores ? 1 : 0)
      << "\n";
  out << "mean_request_latency_s=" << fixed(report.mean_request_latency_s)
      << "\n";
}

MetricsReport read_metrics_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  MetricsReport report;
  std::string line;
  std::size_t line_no = 0;
  auto parse_optional = [](const std::string& v) -> std::optional<double> {
    if (v == "undefined") return std::nullopt;
    return std::stod(v);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + " line " +
                               std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "samples") {
        // derived from the matrix; validated below
      } else if (key == "unclassified") {
        report.unclassified = std::stoull(value);
      } else if (key == "tp") {
        report.cm.tp = std::stoull(value);
      } else if (key == "tn") {
        report.cm.tn = std::stoull(value);
      } else if (key == "fp") {
        report.cm.fp = std::stoull(value);
      } else if (key == "fn") {
        report.cm.fn = std::stoull(value);
      } else if (key == "accuracy") {
        report.accuracy = parse_optional(value);
      } else if (key == "precision") {
        report.precision = parse_optional(value);
      } else if (key == "recall") {
        report.recall = parse_optional(value);
      } else if (key == "f1") {
        report.f1 = parse_optional(value);
      } else if (key == "auc") {
        report.auc = parse_optional(value);
      } else if (key == "auc_from_binary_scores") {
        report.auc_from_binary_scores = value == "1";
      } else if (key == "mean_request_latency_s") {
        report.mean_request_latency_s = std::stod(value);
      } else {
        throw std::runtime_error("unknown key '" + key + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + " line " +
                               std::to_string(line_no) + ": " + e.what());
    }
  }
  return report;
}

namespace {

constexpr const char* kRunLogHeader =
    "timestamp_s,port,features_digest,prediction,truth,latency_s,"
    "packet_in_count,load_proxy,mitigation_action";

}  // namespace

void write_run_log(std::span<const RunLogRow> rows,
                   const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kRunLogHeader << "\n";
  for (const auto& row : rows) {
    out << fixed(row.timestamp_s, "%.3f") << "," << row.port << ","
        << row.features_digest << "," << row.prediction << "," << row.truth
        << "," << fixed(row.latency_s) << "," << row.packet_in_count << ","
        << fixed(row.load_proxy) << "," << row.mitigation_action << "\n";
  }
}

std::vector<RunLogRow> read_run_log(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kRunLogHeader) {
    throw std::runtime_error(path.string() + " line 1: bad or missing header");
  }
  std::vector<RunLogRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (fields.size() != 9) {
      throw std::runtime_error(path.string() + " line " +
                               std::to_string(line_no) + ": expected 9 fields, got " +
                               std::to_string(fields.size()));
    }
    try {
      RunLogRow row;
      row.timestamp_s = std::stod(fields[0]);
      row.port = fields[1];
      row.features_digest = fields[2];
      row.prediction = std::stoi(fields[3]);
      row.truth = std::stoi(fields[4]);
      row.latency_s = std::stod(fields[5]);
      row.packet_in_count = std::stoull(fields[6]);
      row.load_proxy = std::stod(fields[7]);
      row.mitigation_action = fields[8];
      rows.push_back(std::move(row));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + " line " +
                               std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace ragmon
