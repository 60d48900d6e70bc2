#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "ragmon/classifier.hpp"
#include "ragmon/embedding.hpp"
#include "ragmon/mitigation.hpp"
#include "ragmon/representation.hpp"

namespace ragmon {

// Every knob has a default; a config file only overrides. Secrets are never
// read from here (see RAGMON_EMBED_API_KEY / RAGMON_LLM_API_KEY).
struct RunConfig {
  std::uint64_t seed = 1;
  double monitor_interval_s = 10.0;
  std::size_t neighbors_per_class = 3;
  RepresentationKind representation = RepresentationKind::kStructuredJson;
  double split_ratio = 0.8;
  std::string classifier = "oracle";  // oracle | remote

  EmbeddingProviderConfig embedding;
  ModelConfig model;
  MitigationConfig mitigation;

  std::size_t dataset_target_records = 2000;
  double dataset_attack_fraction = 0.45;

  double sim_duration_s = 300.0;
  double sim_attack_start_s = 60.0;
  double sim_attack_end_s = 240.0;
  double sim_attack_pps = 100000.0;
  bool sim_benign_only = false;
  bool sim_mitigation = true;

  std::filesystem::path dataset_path = "data/dataset.jsonl";
  std::filesystem::path index_dir = "data/index";
  std::filesystem::path report_dir = "data/report";
  std::filesystem::path sim_log_path = "data/sim_run.csv";
};

// "key = value" lines; '#' starts a comment, blank lines are skipped.
// Unknown keys and unparseable values are errors (with line numbers), not
// warnings: a typo must not silently fall back to a default.
RunConfig load_config(const std::filesystem::path& path);

// Applies one key/value pair; shared by the file loader and CLI overrides.
void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value);

}  // namespace ragmon
