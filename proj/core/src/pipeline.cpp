#include "ragmon/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ragmon/classifier.hpp"
#include "ragmon/errors.hpp"
#include "ragmon/fabric_sim.hpp"
#include "ragmon/mitigation.hpp"
#include "ragmon/prompt.hpp"
#include "ragmon/rng.hpp"

namespace ragmon::pipeline {

namespace {

std::string features_digest(const InterfaceFeatures& features) {
  // Digest over the canonical JSON rendering, so it is representation- and
  // run-independent for identical features.
  const std::uint64_t h = fnv1a64(render_json(features).text);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

// Classifies one retrieved context. Remote failures surface as
// ok == false (unclassified); they never fabricate a label.
struct ClassifyOutcome {
  bool ok = false;
  ClassificationResult result;
};

ClassifyOutcome classify(const RunConfig& config, const RetrievedContext& ctx,
                         RepresentationKind kind) {
  ClassifyOutcome out;
  if (config.classifier == "remote") {
    const Prompt prompt = build_prompt(ctx, kind);
    try {
      out.result = classify_remote(prompt, config.model);
      out.ok = true;
    } catch (const RemoteUnavailableError&) {
    } catch (const UnparseableReplyError&) {
    }
  } else {
    out.result = classify_oracle(ctx);
    out.ok = true;
  }
  return out;
}

IndexPair load_checked_indices(const RunConfig& config,
                               IndexManifest* manifest_out) {
  IndexManifest manifest;
  auto indices =
      load_indices(config.index_dir, config.embedding.fingerprint(), &manifest);
  if (manifest.kind != config.representation) {
    throw std::invalid_argument(
        std::string("index was built for representation '") +
        to_string(manifest.kind) + "', run asks for '" +
        to_string(config.representation) + "'; rebuild the index");
  }
  if (manifest_out) *manifest_out = manifest;
  return indices;
}

}  // namespace

DatasetSummary generate_dataset(const RunConfig& config) {
  DatasetSpec spec;
  spec.scenarios = default_scenarios(config.seed);
  spec.window_s = config.monitor_interval_s;
  spec.target_records = config.dataset_target_records;
  spec.attack_fraction = config.dataset_attack_fraction;
  spec.seed = config.seed;

  const auto samples = ragmon::generate_dataset(spec);
  const auto records = to_dataset_records(samples);
  write_dataset(records, config.dataset_path);

  DatasetSummary summary;
  summary.total = records.size();
  for (const auto& r : records) {
    r.label == 1 ? ++summary.attack : ++summary.benign;
  }
  summary.path = config.dataset_path;
  return summary;
}

BuildIndexSummary build_index(const RunConfig& config) {
  const auto records = read_dataset(config.dataset_path);
  std::vector<int> labels;
  labels.reserve(records.size());
  for (const auto& r : records) labels.push_back(r.label);

  const auto split = split_dataset(labels, config.split_ratio, config.seed);
  std::size_t per_class[2] = {0, 0};
  for (auto idx : split.retrieval) ++per_class[records[idx].label];
  for (int label : {0, 1}) {
    if (per_class[label] < config.neighbors_per_class) {
      throw std::invalid_argument(
          "retrieval side holds " + std::to_string(per_class[label]) +
          " records of class " + std::to_string(label) + ", need at least " +
          std::to_string(config.neighbors_per_class));
    }
  }

  auto provider = make_embedding_provider(config.embedding);
  std::vector<std::string> texts;
  texts.reserve(split.retrieval.size());
  for (auto idx : split.retrieval) {
    texts.push_back(
        render(records[idx].features, config.representation, records[idx].label)
            .text);
  }
  const auto vectors = provider->embed_batch(texts);

  std::vector<RetrievalRecord> retrieval_records;
  retrieval_records.reserve(split.retrieval.size());
  for (std::size_t i = 0; i < split.retrieval.size(); ++i) {
    const auto& src = records[split.retrieval[i]];
    retrieval_records.push_back(
        {src.id, src.label, texts[i], vectors[i], src.meta});
  }
  auto indices =
      build_indices(std::move(retrieval_records), config.embedding.dimension);

  IndexManifest manifest;
  manifest.dimension = config.embedding.dimension;
  manifest.provider_fingerprint = config.embedding.fingerprint();
  manifest.kind = config.representation;
  manifest.split_ratio = config.split_ratio;
  manifest.split_seed = config.seed;
  manifest.benign_count = indices.benign.size();
  manifest.attack_count = indices.attack.size();
  save_indices(indices, manifest, config.index_dir);

  std::vector<DatasetRecord> test_records;
  test_records.reserve(split.test.size());
  for (auto idx : split.test) test_records.push_back(records[idx]);
  write_dataset(test_records, config.index_dir / "test.jsonl");

  BuildIndexSummary summary;
  summary.manifest = manifest;
  summary.retrieval_count = split.retrieval.size();
  summary.test_count = split.test.size();
  summary.index_dir = config.index_dir;
  return summary;
}

EvaluationOutcome evaluate(const RunConfig& config) {
  const auto indices = load_checked_indices(config, nullptr);
  const auto test_records = read_dataset(config.index_dir / "test.jsonl");
  if (test_records.empty()) {
    throw std::runtime_error("evaluate: held-out split is empty");
  }

  auto provider = make_embedding_provider(config.embedding);
  std::vector<std::string> texts;
  texts.reserve(test_records.size());
  for (const auto& r : test_records) {
    texts.push_back(render(r.features, config.representation).text);
  }
  const auto vectors = provider->embed_batch(texts);

  std::vector<RunLogRow> rows;
  std::vector<int> predictions, truths;
  std::vector<double> scores;
  double latency_sum = 0.0;
  std::uint64_t unclassified = 0;

  for (std::size_t i = 0; i < test_records.size(); ++i) {
    const auto& r = test_records[i];
    const auto ctx = retrieve_context(indices, vectors[i], texts[i],
                                      config.neighbors_per_class);
    const auto outcome = classify(config, ctx, config.representation);

    RunLogRow row;
    row.timestamp_s =
        static_cast<double>(r.meta.window + 1) * r.meta.elapsed_s;
    row.port = r.meta.port;
    row.features_digest = features_digest(r.features);
    row.prediction = outcome.ok ? outcome.result.label : -1;
    row.truth = r.label;
    row.latency_s = outcome.ok ? outcome.result.latency_s : 0.0;
    row.mitigation_action = "none";
    rows.push_back(std::move(row));

    if (!outcome.ok) {
      ++unclassified;
      continue;
    }
    predictions.push_back(outcome.result.label);
    truths.push_back(r.label);
    scores.push_back(outcome.result.score
                         ? *outcome.result.score
                         : static_cast<double>(outcome.result.label));
    latency_sum += outcome.result.latency_s;
  }

  auto report = metrics(confusion(predictions, truths));
  report.unclassified = unclassified;
  if (!predictions.empty()) {
    report.mean_request_latency_s =
        latency_sum / static_cast<double>(predictions.size());
  }
  const bool has_both =
      std::count(truths.begin(), truths.end(), 1) > 0 &&
      std::count(truths.begin(), truths.end(), 0) > 0;
  if (has_both) {
    report.auc = roc_auc(scores, truths);
    report.auc_from_binary_scores = config.classifier == "remote";
  }

  EvaluationOutcome out;
  out.report = report;
  out.metrics_path = config.report_dir / "metrics.txt";
  out.log_path = config.report_dir / "evaluation.csv";
  write_metrics_file(report, out.metrics_path);
  write_run_log(rows, out.log_path);
  return out;
}

SimOutcome run_sim(const RunConfig& config) {
  const auto indices = load_checked_indices(config, nullptr);
  auto provider = make_embedding_provider(config.embedding);

  ScenarioConfig scenario;
  scenario.name = config.sim_benign_only ? "sim-benign" : "sim-attack";
  scenario.duration_s = config.sim_duration_s;
  scenario.seed = fnv1a64(scenario.name, config.seed);
  if (!config.sim_benign_only) {
    scenario.attacks = {{config.sim_attack_start_s, config.sim_attack_end_s,
                         config.sim_attack_pps}};
  }
  Fabric fabric((TopologyConfig()), scenario);

  std::map<std::string, InterfaceCounters> baseline;
  std::map<std::string, PortMitigationState> states;
  for (const auto& port : fabric.host_ports()) {
    baseline[port] = fabric.poll_counters(port);
    states[port] = PortMitigationState{};
  }

  const double dt = config.monitor_interval_s;
  const auto windows = static_cast<std::int64_t>(
      std::floor(config.sim_duration_s / dt + 1e-9));

  SimOutcome outcome;
  for (std::int64_t w = 0; w < windows; ++w) {
    const double t0 = fabric.now_s();
    fabric.advance(dt);
    const double t1 = fabric.now_s();

    SimWindowRecord wrec;
    wrec.end_s = t1;
    wrec.packet_in_count = fabric.window().packet_in_count;
    wrec.load_proxy = fabric.window().controller_load_proxy;
    wrec.attack_packets_emitted = fabric.window().attack_packets_emitted;
    wrec.attack_packets_delivered = fabric.window().attack_packets_delivered;

    for (const auto& port : fabric.host_ports()) {
      auto& state = states[port];
      if (state.phase == PortPhase::kBlocked) continue;  // no work while blocked

      const auto curr = fabric.poll_counters(port);
      const auto features =
          compute_features(window_delta(baseline[port], curr));
      baseline[port] = curr;

      const auto rendered = render(features, config.representation);
      const auto vector = provider->embed(rendered.text);
      const auto ctx = retrieve_context(indices, vector, rendered.text,
                                        config.neighbors_per_class);
      const auto outcome_i = classify(config, ctx, config.representation);

      MitigationActionKind action = MitigationActionKind::kNone;
      if (outcome_i.ok && config.sim_mitigation) {
        auto [next, act] = on_classification(state, outcome_i.result.label, t1);
        state = next;
        action = act;
        if (act == MitigationActionKind::kInstallDrop) {
          fabric.install_drop(port);
          wrec.installs.push_back(port);
          ++outcome.install_count;
        }
      }
      if (!outcome_i.ok) ++outcome.unclassified;

      RunLogRow row;
      row.timestamp_s = t1;
      row.port = port;
      row.features_digest = features_digest(features);
      row.prediction = outcome_i.ok ? outcome_i.result.label : -1;
      row.truth = fabric.port_attack_active(port, t0, t1) ? 1 : 0;
      row.latency_s = outcome_i.ok ? outcome_i.result.latency_s : 0.0;
      row.packet_in_count = wrec.packet_in_count;
      row.load_proxy = wrec.load_proxy;
      row.mitigation_action = to_string(action);
      outcome.rows.push_back(std::move(row));
    }

    if (config.sim_mitigation) {
      for (const auto& port : fabric.host_ports()) {
        auto& state = states[port];
        if (state.phase != PortPhase::kBlocked) continue;
        auto [next, act] = tick(state, t1, config.mitigation);
        if (act != MitigationActionKind::kRemoveDrop) continue;
        state = next;
        fabric.remove_drop(port);
        // Counters moved while the port sat blocked; re-baseline so the
        // next window only covers post-recovery traffic.
        baseline[port] = fabric.poll_counters(port);
        wrec.removes.push_back(port);
        ++outcome.remove_count;

        RunLogRow row;
        row.timestamp_s = t1;
        row.port = port;
        row.prediction = -1;
        row.truth = fabric.port_attack_active(port, t0, t1) ? 1 : 0;
        row.packet_in_count = wrec.packet_in_count;
        row.load_proxy = wrec.load_proxy;
        row.mitigation_action = to_string(act);
        outcome.rows.push_back(std::move(row));
      }
    }

    for (const auto& [port, state] : states) {
      if (state.phase == PortPhase::kBlocked) ++wrec.blocked_ports;
    }
    outcome.windows.push_back(std::move(wrec));
  }

  outcome.log_path = config.sim_log_path;
  write_run_log(outcome.rows, outcome.log_path);
  return outcome;
}

std::string summarize_runs(const std::vector<std::filesystem::path>& logs) {
  if (logs.empty()) {
    throw std::invalid_argument("summarize_runs: no logs given");
  }
  std::ostringstream out;

  struct LogStats {
    std::filesystem::path path;
    std::size_t rows = 0, classified = 0, correct = 0;
    std::size_t installs = 0, removes = 0;
    std::vector<std::pair<double, std::uint64_t>> window_packet_ins;
    double first_install_s = -1.0;
  };
  std::vector<LogStats> stats;

  for (const auto& path : logs) {
    LogStats s;
    s.path = path;
    std::map<double, std::uint64_t> per_window;
    for (const auto& row : read_run_log(path)) {
      ++s.rows;
      per_window[row.timestamp_s] = row.packet_in_count;
      if (row.prediction >= 0) {
        ++s.classified;
        if (row.prediction == row.truth) ++s.correct;
      }
      if (row.mitigation_action == "install_drop") {
        ++s.installs;
        if (s.first_install_s < 0.0) s.first_install_s = row.timestamp_s;
      } else if (row.mitigation_action == "remove_drop") {
        ++s.removes;
      }
    }
    s.window_packet_ins.assign(per_window.begin(), per_window.end());
    stats.push_back(std::move(s));
  }

  auto mean_packet_in = [](const LogStats& s, double from_s) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& [t, count] : s.window_packet_ins) {
      if (t >= from_s) {
        sum += static_cast<double>(count);
        ++n;
      }
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
  };

  for (const auto& s : stats) {
    std::uint64_t peak = 0;
    for (const auto& [t, count] : s.window_packet_ins) {
      peak = std::max(peak, count);
    }
    out << "log " << s.path.string() << "\n";
    out << "  rows " << s.rows << ", windows " << s.window_packet_ins.size()
        << ", classified " << s.classified << "\n";
    if (s.classified > 0) {
      out << "  accuracy "
          << static_cast<double>(s.correct) / static_cast<double>(s.classified)
          << "\n";
    }
    out << "  packet_in mean " << mean_packet_in(s, 0.0) << ", peak " << peak
        << "\n";
    out << "  installs " << s.installs << ", removes " << s.removes << "\n";
  }

  // With a mitigated and an unmitigated run side by side, compare controller
  // pressure after the first detection.
  const LogStats* mitigated = nullptr;
  const LogStats* unmitigated = nullptr;
  for (const auto& s : stats) {
    if (s.installs > 0 && !mitigated) mitigated = &s;
    if (s.installs == 0 && !unmitigated) unmitigated = &s;
  }
  if (stats.size() >= 2 && mitigated && unmitigated) {
    const double detect = mitigated->first_install_s;
    const double with_mit = mean_packet_in(*mitigated, detect);
    const double without = mean_packet_in(*unmitigated, detect);
    out << "post-detection packet_in mean: mitigated " << with_mit
        << ", unmitigated " << without;
    if (without > 0.0) {
      out << ", ratio " << with_mit / without;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace ragmon::pipeline
