#include "ragmon/config.hpp"

#include <fstream>
#include <stdexcept>

namespace ragmon {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

bool parse_bool(const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("expected true/false, got '" + value + "'");
}

double parse_double(const std::string& value) {
  std::size_t used = 0;
  const double parsed = std::stod(value, &used);
  if (used != value.size()) {
    throw std::invalid_argument("trailing characters in number '" + value + "'");
  }
  return parsed;
}

std::uint64_t parse_u64(const std::string& value) {
  std::size_t used = 0;
  const auto parsed = std::stoull(value, &used);
  if (used != value.size()) {
    throw std::invalid_argument("trailing characters in number '" + value + "'");
  }
  return parsed;
}

}  // namespace

void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value) {
  if (key == "seed") {
    config.seed = parse_u64(value);
  } else if (key == "monitor_interval_s") {
    config.monitor_interval_s = parse_double(value);
  } else if (key == "neighbors_per_class") {
    config.neighbors_per_class = parse_u64(value);
  } else if (key == "representation") {
    config.representation = representation_kind_from_string(value);
  } else if (key == "split_ratio") {
    config.split_ratio = parse_double(value);
  } else if (key == "classifier") {
    if (value != "oracle" && value != "remote") {
      throw std::invalid_argument("classifier must be oracle or remote");
    }
    config.classifier = value;
  } else if (key == "embedding.provider") {
    if (value == "test") {
      config.embedding.kind = EmbeddingProviderKind::kDeterministicTest;
    } else if (value == "remote") {
      config.embedding.kind = EmbeddingProviderKind::kRemote;
    } else {
      throw std::invalid_argument("embedding.provider must be test or remote");
    }
  } else if (key == "embedding.dimension") {
    config.embedding.dimension = parse_u64(value);
  } else if (key == "embedding.seed") {
    config.embedding.seed = parse_u64(value);
  } else if (key == "embedding.endpoint") {
    config.embedding.endpoint = value;
  } else if (key == "embedding.model") {
    config.embedding.model = value;
  } else if (key == "embedding.timeout_s") {
    config.embedding.timeout_s = parse_double(value);
  } else if (key == "embedding.batch_size") {
    config.embedding.batch_size = parse_u64(value);
  } else if (key == "embedding.max_in_flight") {
    config.embedding.max_in_flight = parse_u64(value);
  } else if (key == "embedding.normalize") {
    config.embedding.normalize = parse_bool(value);
  } else if (key == "model.endpoint") {
    config.model.endpoint = value;
  } else if (key == "model.name") {
    config.model.model = value;
  } else if (key == "model.temperature") {
    config.model.temperature = parse_double(value);
  } else if (key == "model.max_tokens") {
    config.model.max_tokens = static_cast<int>(parse_u64(value));
  } else if (key == "model.timeout_s") {
    config.model.timeout_s = parse_double(value);
  } else if (key == "model.retries") {
    config.model.retries = static_cast<int>(parse_u64(value));
  } else if (key == "mitigation.block_duration_s") {
    config.mitigation.block_duration_s = parse_double(value);
  } else if (key == "dataset.target_records") {
    config.dataset_target_records = parse_u64(value);
  } else if (key == "dataset.attack_fraction") {
    config.dataset_attack_fraction = parse_double(value);
  } else if (key == "dataset.path") {
    config.dataset_path = value;
  } else if (key == "index.dir") {
    config.index_dir = value;
  } else if (key == "report.dir") {
    config.report_dir = value;
  } else if (key == "sim.duration_s") {
    config.sim_duration_s = parse_double(value);
  } else if (key == "sim.attack_start_s") {
    config.sim_attack_start_s = parse_double(value);
  } else if (key == "sim.attack_end_s") {
    config.sim_attack_end_s = parse_double(value);
  } else if (key == "sim.attack_pps") {
    config.sim_attack_pps = parse_double(value);
  } else if (key == "sim.benign_only") {
    config.sim_benign_only = parse_bool(value);
  } else if (key == "sim.mitigation") {
    config.sim_mitigation = parse_bool(value);
  } else if (key == "sim.log_path") {
    config.sim_log_path = value;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot read config file " + path.string());
  }
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path.string() + " line " +
                               std::to_string(line_no) +
                               ": expected key = value");
    }
    try {
      apply_config_entry(config, trim(line.substr(0, eq)),
                         trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + " line " +
                               std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

}  // namespace ragmon
