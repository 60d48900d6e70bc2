#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ragmon/config.hpp"
#include "ragmon/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> representation;
  std::optional<std::string> classifier;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "config file (key = value lines)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "master seed");
  cmd->add_option("--representation", args.representation,
                  "sample rendering: json or nlr");
  cmd->add_option("--classifier", args.classifier,
                  "classifier backend: oracle or remote");
}

ragmon::RunConfig resolve(const CommonArgs& args) {
  ragmon::RunConfig config;
  if (!args.config_path.empty()) {
    config = ragmon::load_config(args.config_path);
  }
  if (args.seed) config.seed = *args.seed;
  if (args.representation) {
    ragmon::apply_config_entry(config, "representation", *args.representation);
  }
  if (args.classifier) {
    ragmon::apply_config_entry(config, "classifier", *args.classifier);
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"retrieval-augmented carpet-bombing detection over a simulated switch fabric"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate-dataset",
                                 "simulate the traffic scenarios and write the labeled dataset");
  CommonArgs gen_args;
  add_common(gen, gen_args);
  std::optional<std::string> gen_out;
  std::optional<std::uint64_t> gen_target;
  std::optional<double> gen_fraction;
  gen->add_option("--out", gen_out, "dataset JSONL path");
  gen->add_option("--target", gen_target, "record count after subsampling (0 keeps all)");
  gen->add_option("--attack-fraction", gen_fraction, "attack share of the target");

  auto* build = app.add_subcommand("build-index",
                                   "split the dataset and persist the class indexes");
  CommonArgs build_args;
  add_common(build, build_args);
  std::optional<std::string> build_dataset, build_dir;
  std::optional<double> build_ratio;
  build->add_option("--dataset", build_dataset, "dataset JSONL path");
  build->add_option("--index-dir", build_dir, "output index directory");
  build->add_option("--split-ratio", build_ratio, "retrieval share per class");

  auto* eval = app.add_subcommand("evaluate",
                                  "classify the held-out split and write metrics");
  CommonArgs eval_args;
  add_common(eval, eval_args);
  std::optional<std::string> eval_dir, eval_report;
  eval->add_option("--index-dir", eval_dir, "index directory");
  eval->add_option("--report-dir", eval_report, "metrics/report output directory");

  auto* sim = app.add_subcommand("run-sim",
                                 "run the live monitoring loop on a fresh scenario");
  CommonArgs sim_args;
  add_common(sim, sim_args);
  std::optional<std::string> sim_dir, sim_log;
  std::optional<double> sim_pps, sim_duration;
  bool sim_no_mitigation = false;
  bool sim_benign = false;
  sim->add_option("--index-dir", sim_dir, "index directory");
  sim->add_option("--log", sim_log, "run log CSV path");
  sim->add_option("--intensity", sim_pps, "aggregate attack rate in pps");
  sim->add_option("--duration", sim_duration, "scenario length in seconds");
  sim->add_flag("--no-mitigation", sim_no_mitigation,
                "classify but never install drop rules");
  sim->add_flag("--benign-only", sim_benign, "scenario without attack phases");

  auto* rep = app.add_subcommand("report", "summarize one or more run logs");
  std::vector<std::string> rep_logs;
  rep->add_option("logs", rep_logs, "run log CSV paths")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      auto config = resolve(gen_args);
      if (gen_out) config.dataset_path = *gen_out;
      if (gen_target) config.dataset_target_records = *gen_target;
      if (gen_fraction) config.dataset_attack_fraction = *gen_fraction;
      const auto summary = ragmon::pipeline::generate_dataset(config);
      std::cout << "wrote " << summary.total << " records (" << summary.benign
                << " benign, " << summary.attack << " attack) to "
                << summary.path.string() << "\n";
    } else if (build->parsed()) {
      auto config = resolve(build_args);
      if (build_dataset) config.dataset_path = *build_dataset;
      if (build_dir) config.index_dir = *build_dir;
      if (build_ratio) config.split_ratio = *build_ratio;
      const auto summary = ragmon::pipeline::build_index(config);
      std::cout << "indexed " << summary.retrieval_count << " records ("
                << summary.manifest.benign_count << " benign, "
                << summary.manifest.attack_count << " attack), held out "
                << summary.test_count << ", under "
                << summary.index_dir.string() << "\n";
    } else if (eval->parsed()) {
      auto config = resolve(eval_args);
      if (eval_dir) config.index_dir = *eval_dir;
      if (eval_report) config.report_dir = *eval_report;
      const auto outcome = ragmon::pipeline::evaluate(config);
      const auto& r = outcome.report;
      auto show = [](const std::optional<double>& v) {
        if (!v) return std::string("undefined");
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", *v);
        return std::string(buf);
      };
      std::cout << "samples " << r.cm.total() + r.unclassified
                << ", unclassified " << r.unclassified << "\n"
                << "accuracy " << show(r.accuracy) << ", precision "
                << show(r.precision) << ", recall " << show(r.recall)
                << ", f1 " << show(r.f1) << ", auc " << show(r.auc) << "\n"
                << "metrics written to " << outcome.metrics_path.string()
                << "\n";
    } else if (sim->parsed()) {
      auto config = resolve(sim_args);
      if (sim_dir) config.index_dir = *sim_dir;
      if (sim_log) config.sim_log_path = *sim_log;
      if (sim_pps) config.sim_attack_pps = *sim_pps;
      if (sim_duration) config.sim_duration_s = *sim_duration;
      if (sim_no_mitigation) config.sim_mitigation = false;
      if (sim_benign) config.sim_benign_only = true;
      const auto outcome = ragmon::pipeline::run_sim(config);
      std::cout << "ran " << outcome.windows.size() << " windows, "
                << outcome.rows.size() << " rows, " << outcome.install_count
                << " drops installed, " << outcome.remove_count
                << " removed, " << outcome.unclassified
                << " unclassified; log at " << outcome.log_path.string()
                << "\n";
    } else if (rep->parsed()) {
      std::vector<std::filesystem::path> paths(rep_logs.begin(),
                                               rep_logs.end());
      std::cout << ragmon::pipeline::summarize_runs(paths);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
