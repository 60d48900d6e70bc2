#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ragmon/config.hpp"
#include "ragmon/dataset.hpp"
#include "ragmon/evaluation.hpp"
#include "ragmon/retrieval.hpp"

namespace ragmon::pipeline {

struct DatasetSummary {
  std::size_t total = 0;
  std::size_t benign = 0;
  std::size_t attack = 0;
  std::filesystem::path path;
};

// generate-dataset: default scenarios at config.seed, subsampled to
// config.dataset_target_records / attack_fraction, written as JSONL.
DatasetSummary generate_dataset(const RunConfig& config);

struct BuildIndexSummary {
  IndexManifest manifest;
  std::size_t retrieval_count = 0;
  std::size_t test_count = 0;
  std::filesystem::path index_dir;
};

// build-index: stratified split of the dataset, labeled rendering and
// embedding of the retrieval side, class indexes persisted under
// config.index_dir (the held-out side goes to test.jsonl alongside).
BuildIndexSummary build_index(const RunConfig& config);

struct EvaluationOutcome {
  MetricsReport report;
  std::filesystem::path metrics_path;
  std::filesystem::path log_path;
};

// evaluate: classifies the held-out split against the persisted indexes.
// Remote failures count as unclassified rows, never as a default label.
EvaluationOutcome evaluate(const RunConfig& config);

// Per-window aggregate of one live-loop iteration.
struct SimWindowRecord {
  double end_s = 0.0;
  std::uint64_t packet_in_count = 0;
  double load_proxy = 0.0;
  std::uint64_t attack_packets_emitted = 0;
  std::uint64_t attack_packets_delivered = 0;
  std::vector<std::string> installs;
  std::vector<std::string> removes;
  std::size_t blocked_ports = 0;
};

struct SimOutcome {
  std::vector<RunLogRow> rows;
  std::vector<SimWindowRecord> windows;
  std::filesystem::path log_path;
  std::size_t install_count = 0;
  std::size_t remove_count = 0;
  std::uint64_t unclassified = 0;
};

// run-sim: the closed monitoring loop on the simulated fabric. Each window:
// poll all host ports, classify the non-blocked ones, apply mitigation
// actions, then tick recovery timers. Blocked ports are not classified and
// produce rows only when their drop rule is removed.
SimOutcome run_sim(const RunConfig& config);

// report: human-readable digest of one or more run logs (row counts,
// packet-in statistics, action tallies, accuracy over classified rows).
std::string summarize_runs(const std::vector<std::filesystem::path>& logs);

}  // namespace ragmon::pipeline
