// Acceptance gate for the detection/mitigation engine.
//
// Runs ten end-to-end checks with pinned tolerances and prints exactly one
// [PASS]/[FAIL] line per check; the process exit code is the number of
// failures. `--only N` runs a single check (used by the ctest registration),
// `--list` prints the roster.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ragmon/classifier.hpp"
#include "ragmon/config.hpp"
#include "ragmon/dataset.hpp"
#include "ragmon/embedding.hpp"
#include "ragmon/evaluation.hpp"
#include "ragmon/mitigation.hpp"
#include "ragmon/pipeline.hpp"
#include "ragmon/prompt.hpp"
#include "ragmon/representation.hpp"
#include "ragmon/retrieval.hpp"
#include "ragmon/telemetry.hpp"

namespace {

using namespace ragmon;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Check plumbing
// ---------------------------------------------------------------------------

std::string printable(std::string_view text, std::size_t from, std::size_t len) {
  std::string out;
  for (std::size_t i = from; i < text.size() && i < from + len; ++i) {
    const char c = text[i];
    if (c == '\n') {
      out += "\\n";
    } else if (c == '\t') {
      out += "\\t";
    } else {
      out += c;
    }
  }
  return out;
}

struct Check {
  std::vector<std::string> failures;

  void require(bool ok, std::string what) {
    if (!ok) failures.push_back(std::move(what));
  }

  void equal_u64(std::uint64_t got, std::uint64_t want, const std::string& what) {
    if (got != want) {
      failures.push_back(what + ": got " + std::to_string(got) + ", want " +
                         std::to_string(want));
    }
  }

  void equal_text(const std::string& got, const std::string& want,
                  const std::string& what) {
    if (got == want) return;
    std::size_t i = 0;
    while (i < got.size() && i < want.size() && got[i] == want[i]) ++i;
    const std::size_t from = (i >= 16) ? i - 16 : 0;
    std::ostringstream os;
    os << what << ": first difference at byte " << i << "\n        want ..."
       << printable(want, from, 48) << "\n        got  ..."
       << printable(got, from, 48);
    failures.push_back(os.str());
  }
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t count_occurrences(std::string_view text, std::string_view needle) {
  std::size_t count = 0;
  std::size_t pos = text.find(needle);
  while (pos != std::string_view::npos) {
    ++count;
    pos = text.find(needle, pos + needle.size());
  }
  return count;
}

// ---------------------------------------------------------------------------
// Golden fixtures: raw counter movements and the exact display strings the
// renderer must emit for them. The reference strings are frozen verbatim;
// the deltas are the raw inputs those strings state (counts plus window
// length), so every derived field is recomputed by the engine under test.
// ---------------------------------------------------------------------------

CounterDelta mk_delta(std::uint64_t rx_packets, std::uint64_t rx_bytes,
                      std::uint64_t tx_packets, std::uint64_t tx_bytes,
                      double elapsed_s = 10.0) {
  CounterDelta d;
  d.port_id = "s1-eth1";
  d.elapsed_s = elapsed_s;
  d.rx_packets = rx_packets;
  d.rx_bytes = rx_bytes;
  d.tx_packets = tx_packets;
  d.tx_bytes = tx_bytes;
  return d;
}

struct GoldenBlock {
  const char* name;
  CounterDelta delta;
  std::optional<int> label;
  RepresentationKind kind;
  const char* expected;
};

constexpr RepresentationKind kJson = RepresentationKind::kStructuredJson;
constexpr RepresentationKind kNlr = RepresentationKind::kNaturalLanguage;

std::vector<GoldenBlock> golden_blocks() {
  std::vector<GoldenBlock> blocks;

  // Representation-table rows: one labeled retrieval row and one unlabeled
  // query row, in both renderings.
  blocks.push_back(
      {"table json retrieval", mk_delta(174, 12776, 193, 15671), 0, kJson,
       R"gold({"interface_status": {"input_features": {"received": {"packets": 174, "bytes": 12776, "packets_per_second": 17.4, "bytes_per_second": 1277.6, "avg_packet_size": 73.4253}, "sent": {"packets": 193, "bytes": 15671, "packets_per_second": 19.3, "bytes_per_second": 1567.1, "avg_packet_size": 81.1969}}, "output_label": 0}})gold"});
  blocks.push_back(
      {"table json query", mk_delta(955, 1381981, 795, 52672), std::nullopt, kJson,
       R"gold({"interface_status": {"input_features": {"received": {"packets": 955, "bytes": 1381981, "packets_per_second": 95.5, "bytes_per_second": 138198.1, "avg_packet_size": 1447.1005}, "sent": {"packets": 795, "bytes": 52672, "packets_per_second": 79.5, "bytes_per_second": 5267.2, "avg_packet_size": 66.2541}}}})gold"});
  blocks.push_back(
      {"table nlr retrieval", mk_delta(174, 12776, 193, 15671), 0, kNlr,
       "The interface received 174 packets totaling 12776 bytes with a rate "
       "of 17.4 packets per second and 1277.6 bytes per second. The average "
       "received packet size was 73.4253 bytes. It transmitted 193 packets "
       "totaling 15671 bytes at a rate of 19.3 packets per second and 1567.1 "
       "bytes per second with an average transmitted packet size of 81.1969 "
       "bytes. The interface label is 0."});
  blocks.push_back(
      {"table nlr query", mk_delta(955, 1381981, 795, 52672), std::nullopt, kNlr,
       "The interface received 955 packets totaling 1381981 bytes with a "
       "rate of 95.5 packets per second and 138198.1 bytes per second. The "
       "average received packet size was 1447.1005 bytes. It transmitted 795 "
       "packets totaling 52672 bytes at a rate of 79.5 packets per second "
       "and 5267.2 bytes per second with an average transmitted packet size "
       "of 66.2541 bytes."});

  // Reference prompt panel, structured rendering: six labeled examples and
  // the unlabeled target.
  blocks.push_back(
      {"panel json benign 1", mk_delta(4932, 7084704, 1, 98), 0, kJson,
       R"gold({"interface_status": {"input_features": {"received": {"packets": 4932, "bytes": 7084704, "packets_per_second": 493.2, "bytes_per_second": 708470.4, "avg_packet_size": 1436.4769}, "sent": {"packets": 1, "bytes": 98, "packets_per_second": 0.1, "bytes_per_second": 9.8, "avg_packet_size": 98.0}}, "output_label": 0}})gold"});
  blocks.push_back(
      {"panel json benign 2", mk_delta(7090, 10173308, 8, 432), 0, kJson,
       R"gold({"interface_status": {"input_features": {"received": {"packets": 7090, "bytes": 10173308, "packets_per_second": 709.0, "bytes_per_second": 1017330.8, "avg_packet_size": 1434.8812}, "sent": {"packets": 8, "bytes": 432, "packets_per_second": 0.8, "bytes_per_second": 43.2, "avg_packet_size": 54.0}}, "output_label": 0}})gold"});
  blocks.push_back(
      {"panel json benign 3", mk_delta(3837, 5493306, 1, 98), 0, kJson,
       R"gold({"interface_status": {"input_features": {"received": {"packets": 3837, "bytes": 5493306, "packets_per_second": 383.7, "bytes_per_second": 549330.6, "avg_packet_size": 1431.6669}, "sent": {"packets": 1, "bytes": 98, "packets_per_second": 0.1, "bytes_per_second": 9.8, "avg_packet_size": 98.0}}, "output_label": 0}})gold"});
  blocks.push_back(
      {"panel json attack 1", mk_delta(209303, 34909398, 3, 126), 1, kJson,
       R"gold({"interface_status": {"input_features": {"received": {"packets": 209303, "bytes": 34909398, "packets_per_second": 20930.3, "bytes_per_second": 3490939.8, "avg_packet_size": 166.7888}, "sent": {"packets": 3, "bytes": 126, "packets_per_second": 0.3, "bytes_per_second": 12.6, "avg_packet_size": 42.0}}, "output_label": 1}})gold"});
  blocks.push_back(
      {"panel json attack 2", mk_delta(279983, 46206566, 1, 42), 1, kJson,
       R"gold({"interface_status": {"input_features": {"received": {"packets": 279983, "bytes": 46206566, "packets_per_second": 27998.3, "bytes_per_second": 4620656.6, "avg_packet_size": 165.0335}, "sent": {"packets": 1, "bytes": 42, "packets_per_second": 0.1, "bytes_per_second": 4.2, "avg_packet_size": 42.0}}, "output_label": 1}})gold"});
  blocks.push_back(
      {"panel json attack 3", mk_delta(334864, 56956136, 2, 84), 1, kJson,
       R"gold({"interface_status": {"input_features": {"received": {"packets": 334864, "bytes": 56956136, "packets_per_second": 33486.4, "bytes_per_second": 5695613.6, "avg_packet_size": 170.0874}, "sent": {"packets": 2, "bytes": 84, "packets_per_second": 0.2, "bytes_per_second": 8.4, "avg_packet_size": 42.0}}, "output_label": 1}})gold"});
  blocks.push_back(
      {"panel json target", mk_delta(4386, 6317894, 2, 148), std::nullopt, kJson,
       R"gold({"interface_status": {"input_features": {"received": {"packets": 4386, "bytes": 6317894, "packets_per_second": 438.6, "bytes_per_second": 631789.4, "avg_packet_size": 1440.4683}, "sent": {"packets": 2, "bytes": 148, "packets_per_second": 0.2, "bytes_per_second": 14.8, "avg_packet_size": 74.0}}}})gold"});

  // Reference prompt panel, natural-language rendering. The second benign
  // example states rates derived over an 11-second window.
  blocks.push_back(
      {"panel nlr benign 1", mk_delta(4360, 6248696, 6, 444), 0, kNlr,
       "The interface received 4360 packets totaling 6248696 bytes with a "
       "rate of 436.0 packets per second and 624869.6 bytes per second. The "
       "average received packet size was 1433.1872 bytes. It transmitted 6 "
       "packets totaling 444 bytes at a rate of 0.6 packets per second and "
       "44.4 bytes per second with an average transmitted packet size of "
       "74.0 bytes. The interface label is 0."});
  blocks.push_back(
      {"panel nlr benign 2", mk_delta(4384, 6288876, 1, 74, 11.0), 0, kNlr,
       "The interface received 4384 packets totaling 6288876 bytes with a "
       "rate of 398.5455 packets per second and 571716.0 bytes per second. "
       "The average received packet size was 1434.5064 bytes. It transmitted "
       "1 packets totaling 74 bytes at a rate of 0.0909 packets per second "
       "and 6.7273 bytes per second with an average transmitted packet size "
       "of 74.0 bytes. The interface label is 0."});
  blocks.push_back(
      {"panel nlr benign 3", mk_delta(4378, 6310388, 2, 196), 0, kNlr,
       "The interface received 4378 packets totaling 6310388 bytes with a "
       "rate of 437.8 packets per second and 631038.8 bytes per second. The "
       "average received packet size was 1441.386 bytes. It transmitted 2 "
       "packets totaling 196 bytes at a rate of 0.2 packets per second and "
       "19.6 bytes per second with an average transmitted packet size of "
       "98.0 bytes. The interface label is 0."});
  blocks.push_back(
      {"panel nlr attack 1", mk_delta(326982, 54194816, 9, 378), 1, kNlr,
       "The interface received 326982 packets totaling 54194816 bytes with a "
       "rate of 32698.2 packets per second and 5419481.6 bytes per second. "
       "The average received packet size was 165.7425 bytes. It transmitted "
       "9 packets totaling 378 bytes at a rate of 0.9 packets per second and "
       "37.8 bytes per second with an average transmitted packet size of "
       "42.0 bytes. The interface label is 1."});
  blocks.push_back(
      {"panel nlr attack 2", mk_delta(263418, 44260020, 4, 168), 1, kNlr,
       "The interface received 263418 packets totaling 44260020 bytes with a "
       "rate of 26341.8 packets per second and 4426002.0 bytes per second. "
       "The average received packet size was 168.022 bytes. It transmitted 4 "
       "packets totaling 168 bytes at a rate of 0.4 packets per second and "
       "16.8 bytes per second with an average transmitted packet size of "
       "42.0 bytes. The interface label is 1."});
  blocks.push_back(
      {"panel nlr attack 3", mk_delta(327630, 55282084, 27, 1134), 1, kNlr,
       "The interface received 327630 packets totaling 55282084 bytes with a "
       "rate of 32763.0 packets per second and 5528208.4 bytes per second. "
       "The average received packet size was 168.7333 bytes. It transmitted "
       "27 packets totaling 1134 bytes at a rate of 2.7 packets per second "
       "and 113.4 bytes per second with an average transmitted packet size "
       "of 42.0 bytes. The interface label is 1."});
  blocks.push_back(
      {"panel nlr target", mk_delta(4386, 6317894, 2, 148), std::nullopt, kNlr,
       "The interface received 4386 packets totaling 6317894 bytes with a "
       "rate of 438.6 packets per second and 631789.4 bytes per second. The "
       "average received packet size was 1440.4683 bytes. It transmitted 2 "
       "packets totaling 148 bytes at a rate of 0.2 packets per second and "
       "14.8 bytes per second with an average transmitted packet size of "
       "74.0 bytes."});

  return blocks;
}

// ---------------------------------------------------------------------------
// Shared desk-scale workspace. Built lazily so `--only N` pays only for what
// criterion N needs; removed on process exit.
// ---------------------------------------------------------------------------

struct Workspace {
  fs::path root;
  std::optional<pipeline::DatasetSummary> dataset;
  std::map<std::string, pipeline::BuildIndexSummary> index;  // keyed by kind tag

  Workspace() {
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    root = fs::temp_directory_path() /
           ("ragmon-acceptance-" + std::to_string(::getpid()) + "-" +
            std::to_string(stamp));
    fs::create_directories(root);
  }

  ~Workspace() {
    std::error_code ec;
    fs::remove_all(root, ec);
  }

  static const char* tag(RepresentationKind kind) {
    return kind == kJson ? "json" : "nlr";
  }

  // Library defaults are the acceptance configuration: 2000 records at a
  // 0.45 attack fraction over all four intensities, deterministic test
  // embedder, oracle classifier, 80/20 split, k = 3.
  RunConfig config(RepresentationKind kind) const {
    RunConfig c;
    c.representation = kind;
    c.dataset_path = root / "dataset.jsonl";
    c.index_dir = root / (std::string("index-") + tag(kind));
    c.report_dir = root / (std::string("report-") + tag(kind));
    c.sim_log_path = root / (std::string("sim-") + tag(kind) + ".csv");
    return c;
  }

  RunConfig ensure_index(RepresentationKind kind) {
    RunConfig c = config(kind);
    if (!dataset) dataset = pipeline::generate_dataset(c);
    if (index.find(tag(kind)) == index.end()) {
      index.emplace(tag(kind), pipeline::build_index(c));
    }
    return c;
  }
};

Workspace& workspace() {
  static Workspace w;
  return w;
}

const std::set<std::string> kAttackerPorts{"s1-eth2", "s2-eth2", "s3-eth2",
                                           "s4-eth2"};

// ---------------------------------------------------------------------------
// 1. Golden serialization
// ---------------------------------------------------------------------------

void c01_golden_serialization(Check& chk) {
  for (const auto& block : golden_blocks()) {
    const InterfaceFeatures features = compute_features(block.delta);
    const RenderedSample sample = render(features, block.kind, block.label);
    chk.equal_text(sample.text, block.expected, block.name);
    chk.require(sample.kind == block.kind,
                std::string(block.name) + ": rendered kind mismatch");
    chk.require(sample.label == block.label,
                std::string(block.name) + ": rendered label mismatch");
  }
}

// ---------------------------------------------------------------------------
// 2. Feature arithmetic at the display rounding rule
// ---------------------------------------------------------------------------

void c02_feature_arithmetic(Check& chk) {
  const auto want = [&chk](double value, const char* expected,
                           const char* what) {
    chk.equal_text(format_quantity(value), expected, what);
  };

  const InterfaceFeatures retr = compute_features(mk_delta(174, 12776, 193, 15671));
  chk.equal_u64(retr.received.packets, 174, "retrieval row rx packets");
  chk.equal_u64(retr.received.bytes, 12776, "retrieval row rx bytes");
  want(retr.received.packets_per_second, "17.4", "retrieval row rx pps");
  want(retr.received.bytes_per_second, "1277.6", "retrieval row rx Bps");
  want(retr.received.avg_packet_size, "73.4253", "retrieval row rx avg size");
  want(retr.sent.packets_per_second, "19.3", "retrieval row tx pps");
  want(retr.sent.bytes_per_second, "1567.1", "retrieval row tx Bps");
  want(retr.sent.avg_packet_size, "81.1969", "retrieval row tx avg size");

  const InterfaceFeatures query = compute_features(mk_delta(955, 1381981, 795, 52672));
  want(query.received.packets_per_second, "95.5", "query row rx pps");
  want(query.received.bytes_per_second, "138198.1", "query row rx Bps");
  want(query.received.avg_packet_size, "1447.1005", "query row rx avg size");
  want(query.sent.packets_per_second, "79.5", "query row tx pps");
  want(query.sent.bytes_per_second, "5267.2", "query row tx Bps");
  want(query.sent.avg_packet_size, "66.2541", "query row tx avg size");

  // Eleven-second window: every rate divides by 11.
  const InterfaceFeatures eleven = compute_features(mk_delta(4384, 6288876, 1, 74, 11.0));
  want(eleven.received.packets_per_second, "398.5455", "11 s window rx pps");
  want(eleven.received.bytes_per_second, "571716.0", "11 s window rx Bps");
  want(eleven.received.avg_packet_size, "1434.5064", "11 s window rx avg size");
  want(eleven.sent.packets_per_second, "0.0909", "11 s window tx pps");
  want(eleven.sent.bytes_per_second, "6.7273", "11 s window tx Bps");
  want(eleven.sent.avg_packet_size, "74.0", "11 s window tx avg size");

  const InterfaceFeatures benign = compute_features(mk_delta(4932, 7084704, 1, 98));
  want(benign.received.packets_per_second, "493.2", "benign example rx pps");
  want(benign.received.bytes_per_second, "708470.4", "benign example rx Bps");
  want(benign.received.avg_packet_size, "1436.4769", "benign example rx avg size");
  want(benign.sent.avg_packet_size, "98.0", "benign example tx avg size");

  // Trailing-zero stripping on rounded averages.
  want(compute_features(mk_delta(4378, 6310388, 2, 196)).received.avg_packet_size,
       "1441.386", "stripped rx avg size 1441.386");
  want(compute_features(mk_delta(263418, 44260020, 4, 168)).received.avg_packet_size,
       "168.022", "stripped rx avg size 168.022");
  want(compute_features(mk_delta(209303, 34909398, 3, 126)).received.avg_packet_size,
       "166.7888", "attack example rx avg size");
  want(compute_features(mk_delta(326982, 54194816, 9, 378)).received.avg_packet_size,
       "165.7425", "attack example rx avg size (nlr)");
}

// ---------------------------------------------------------------------------
// 3. Retrieval exactness against an independent brute-force scan
// ---------------------------------------------------------------------------

void c03_retrieval_exactness(Check& chk) {
  for (const std::size_t dim : {std::size_t{32}, std::size_t{384}}) {
    std::mt19937_64 rng(1000 + dim);
    std::uniform_real_distribution<float> unit(-1.0F, 1.0F);

    std::vector<std::vector<float>> raw(1000);
    ClassIndex index(0, dim);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      raw[i].resize(dim);
      for (auto& v : raw[i]) v = unit(rng);
      RetrievalRecord rec;
      rec.id = static_cast<std::int64_t>(i);
      rec.label = 0;
      rec.rendered_text = "r" + std::to_string(i);
      rec.vector = raw[i];
      index.add(std::move(rec));
    }

    std::size_t mismatches = 0;
    for (int q = 0; q < 200; ++q) {
      std::vector<float> query(dim);
      for (auto& v : query) v = unit(rng);

      // Independent oracle: exhaustive scan, double accumulation, full sort
      // on (distance, id).
      std::vector<std::pair<double, std::int64_t>> all;
      all.reserve(raw.size());
      for (std::size_t i = 0; i < raw.size(); ++i) {
        double dist = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
          const double diff =
              static_cast<double>(query[d]) - static_cast<double>(raw[i][d]);
          dist += diff * diff;
        }
        all.emplace_back(dist, static_cast<std::int64_t>(i));
      }
      std::sort(all.begin(), all.end());

      const auto hits = index.search(query, 3);
      bool ok = hits.size() == 3;
      for (std::size_t j = 0; ok && j < hits.size(); ++j) {
        ok = hits[j].id == all[j].second && hits[j].distance == all[j].first;
      }
      if (!ok) ++mismatches;
    }
    chk.require(mismatches == 0,
                "D=" + std::to_string(dim) + ": " + std::to_string(mismatches) +
                    "/200 queries disagree with brute force");
  }
}

// ---------------------------------------------------------------------------
// 4. Metric equations on the documented confusion counts
// ---------------------------------------------------------------------------

void c04_metric_equations(Check& chk) {
  ConfusionMatrix cm;
  cm.tp = 11017;
  cm.tn = 8970;
  cm.fp = 7;
  cm.fn = 6;
  const MetricsReport report = metrics(cm);

  chk.equal_u64(report.cm.total(), 20000, "confusion total");
  chk.require(report.accuracy.has_value(), "accuracy must be defined");
  if (report.accuracy) {
    const double accuracy = *report.accuracy;
    chk.require(std::fabs(accuracy - 0.99935) <= 1e-5,
                "accuracy " + std::to_string(accuracy) +
                    " not within 1e-5 of 0.99935");
    // Percent form, half-up at two decimals, must read 99.94.
    const auto hundredths =
        static_cast<long long>(std::floor(accuracy * 10000.0 + 0.5));
    chk.require(hundredths == 9994,
                "accuracy percent rounds to " +
                    std::to_string(hundredths / 100.0) + ", want 99.94");
  }
  // The published precision/recall cells are internally inconsistent with
  // these counts and are deliberately not asserted here.
}

// ---------------------------------------------------------------------------
// 5. Oracle end-to-end on the desk corpus, both representations
// ---------------------------------------------------------------------------

void c05_oracle_end_to_end(Check& chk) {
  for (const RepresentationKind kind : {kJson, kNlr}) {
    const std::string tag = Workspace::tag(kind);
    const RunConfig cfg = workspace().ensure_index(kind);

    const auto& dataset = workspace().dataset;
    chk.require(dataset.has_value(), tag + ": dataset summary missing");
    if (dataset) {
      chk.equal_u64(dataset->total, 2000, tag + ": dataset total");
      chk.equal_u64(dataset->attack, 900, tag + ": dataset attack records");
      chk.equal_u64(dataset->benign, 1100, tag + ": dataset benign records");
    }
    const auto& built = workspace().index.at(tag);
    chk.equal_u64(built.manifest.benign_count, 880,
                  tag + ": retrieval benign count (floor of 0.8 * 1100)");
    chk.equal_u64(built.manifest.attack_count, 720,
                  tag + ": retrieval attack count (floor of 0.8 * 900)");
    chk.equal_u64(built.test_count, 400, tag + ": held-out count");

    const pipeline::EvaluationOutcome out = pipeline::evaluate(cfg);
    const MetricsReport& m = out.report;
    chk.equal_u64(m.unclassified, 0, tag + ": unclassified rows");
    chk.require(m.accuracy && *m.accuracy >= 0.99,
                tag + ": accuracy " +
                    (m.accuracy ? std::to_string(*m.accuracy) : "undefined") +
                    " below 0.99");
    chk.require(m.f1 && *m.f1 >= 0.99,
                tag + ": F1 " + (m.f1 ? std::to_string(*m.f1) : "undefined") +
                    " below 0.99");
    chk.require(m.auc && *m.auc >= 0.999,
                tag + ": AUC " + (m.auc ? std::to_string(*m.auc) : "undefined") +
                    " below 0.999");
    chk.require(!m.auc_from_binary_scores,
                tag + ": oracle scores must be graded, not binary");
    chk.require(fs::exists(out.metrics_path), tag + ": metrics file missing");
    chk.require(fs::exists(out.log_path), tag + ": evaluation log missing");
  }
}

// ---------------------------------------------------------------------------
// 6. Mitigation timing in the live loop
// ---------------------------------------------------------------------------

void c06_mitigation_timing(Check& chk) {
  RunConfig cfg = workspace().ensure_index(kJson);
  cfg.sim_log_path = workspace().root / "sim-timing.csv";
  const pipeline::SimOutcome sim = pipeline::run_sim(cfg);

  chk.equal_u64(sim.unclassified, 0, "unclassified sim rows");

  std::map<std::string, std::vector<std::pair<double, std::string>>> actions;
  for (const auto& row : sim.rows) {
    if (row.mitigation_action == "install_drop" ||
        row.mitigation_action == "remove_drop") {
      actions[row.port].emplace_back(row.timestamp_s, row.mitigation_action);
    }
  }

  for (const auto& port : kAttackerPorts) {
    const auto it = actions.find(port);
    if (it == actions.end()) {
      chk.require(false, port + ": never received a drop rule");
      continue;
    }
    const auto& seq = it->second;
    chk.require(seq.front().second == "install_drop",
                port + ": first action is " + seq.front().second);
    chk.require(seq.front().first <= cfg.sim_attack_start_s + 20.0,
                port + ": first install at " +
                    std::to_string(seq.front().first) +
                    " s, more than 2 windows after onset");

    for (std::size_t i = 0; i < seq.size(); ++i) {
      // Strict alternation within one port's action stream.
      const bool expect_install = (i % 2 == 0);
      chk.require(seq[i].second ==
                      (expect_install ? "install_drop" : "remove_drop"),
                  port + ": action " + std::to_string(i) + " breaks install/remove alternation");
      if (seq[i].second != "install_drop") continue;
      const double release_due = seq[i].first + cfg.mitigation.block_duration_s;
      if (release_due > cfg.sim_duration_s) continue;  // run ends first
      if (i + 1 >= seq.size()) {
        chk.require(false, port + ": install at " +
                               std::to_string(seq[i].first) +
                               " s has no matching release");
        continue;
      }
      chk.require(seq[i + 1].second == "remove_drop" &&
                      seq[i + 1].first == release_due,
                  port + ": install at " + std::to_string(seq[i].first) +
                      " s released at " + std::to_string(seq[i + 1].first) +
                      " s, want exactly " + std::to_string(release_due));
    }
  }
}

// ---------------------------------------------------------------------------
// 7. Mitigation efficacy proxy against the unmitigated twin run
// ---------------------------------------------------------------------------

void c07_mitigation_efficacy(Check& chk) {
  RunConfig mitigated_cfg = workspace().ensure_index(kJson);
  mitigated_cfg.sim_log_path = workspace().root / "sim-mitigated.csv";
  RunConfig unmitigated_cfg = mitigated_cfg;
  unmitigated_cfg.sim_mitigation = false;
  unmitigated_cfg.sim_log_path = workspace().root / "sim-unmitigated.csv";

  const pipeline::SimOutcome mitigated = pipeline::run_sim(mitigated_cfg);
  const pipeline::SimOutcome unmitigated = pipeline::run_sim(unmitigated_cfg);
  chk.equal_u64(unmitigated.install_count, 0,
                "unmitigated run must install nothing");

  double detection_s = 0.0;
  for (const auto& row : mitigated.rows) {
    if (row.mitigation_action == "install_drop") {
      detection_s = row.timestamp_s;
      break;
    }
  }
  chk.require(detection_s > 0.0, "mitigated run never installed a drop rule");
  if (detection_s <= 0.0) return;

  // Same logical interval in both runs: after detection, while the attack
  // is live.
  const auto mean_packet_in = [&](const pipeline::SimOutcome& sim) {
    long double sum = 0.0;
    std::size_t n = 0;
    for (const auto& w : sim.windows) {
      if (w.end_s > detection_s && w.end_s <= mitigated_cfg.sim_attack_end_s) {
        sum += static_cast<long double>(w.packet_in_count);
        ++n;
      }
    }
    return n == 0 ? 0.0 : static_cast<double>(sum / static_cast<long double>(n));
  };
  const double mitigated_mean = mean_packet_in(mitigated);
  const double unmitigated_mean = mean_packet_in(unmitigated);
  chk.require(unmitigated_mean > 0.0, "unmitigated mean packet-in is zero");
  chk.require(mitigated_mean <= 0.5 * unmitigated_mean,
              "post-detection packet-in mean " + std::to_string(mitigated_mean) +
                  " exceeds half of unmitigated " +
                  std::to_string(unmitigated_mean));

  // While every attacker port holds a drop rule (and no install landed at
  // the window edge), nothing malicious reaches a victim.
  std::size_t fully_blocked_windows = 0;
  for (const auto& w : mitigated.windows) {
    if (w.blocked_ports == kAttackerPorts.size() && w.installs.empty()) {
      ++fully_blocked_windows;
      chk.equal_u64(w.attack_packets_delivered, 0,
                    "victim ingress at window ending " + std::to_string(w.end_s));
    }
  }
  chk.require(fully_blocked_windows > 0,
              "no fully blocked window observed during the run");
}

// ---------------------------------------------------------------------------
// 8. State-machine invariants on randomized traces
// ---------------------------------------------------------------------------

void c08_state_machine(Check& chk) {
  const MitigationConfig mc;  // 40 s hold
  const double tick_s = 10.0;
  std::mt19937_64 rng(20260814);
  std::bernoulli_distribution attack_label(0.3);

  for (int replica = 0; replica < 4; ++replica) {
    PortMitigationState state;
    double now = 0.0;
    std::uint64_t installs = 0;
    std::uint64_t removes = 0;
    bool expect_install = true;

    for (int step = 0; step < 10000; ++step) {
      now += tick_s;

      if (state.phase == PortPhase::kBlocked) {
        // Blocked ports are never classified; the machine enforces it.
        bool threw = false;
        try {
          on_classification(state, attack_label(rng) ? 1 : 0, now);
        } catch (const std::logic_error&) {
          threw = true;
        }
        if (!threw) {
          chk.require(false, "classification accepted while blocked");
          return;
        }
      } else {
        const auto [next, action] =
            on_classification(state, attack_label(rng) ? 1 : 0, now);
        if (action == MitigationActionKind::kInstallDrop) {
          if (!expect_install) {
            chk.require(false, "install without intervening remove");
            return;
          }
          expect_install = false;
          ++installs;
          chk.require(next.phase == PortPhase::kBlocked &&
                          next.blocked_since_s == now,
                      "install must enter blocked state stamped now");
        } else {
          chk.require(action == MitigationActionKind::kNone,
                      "monitoring tick produced a remove");
          chk.require(next.phase == PortPhase::kMonitoring,
                      "benign classification left monitoring");
        }
        state = next;
      }

      const auto [next, action] = tick(state, now, mc);
      if (action == MitigationActionKind::kRemoveDrop) {
        const double held = now - state.blocked_since_s;
        if (expect_install) {
          chk.require(false, "remove without a prior install");
          return;
        }
        expect_install = true;
        ++removes;
        chk.require(held >= mc.block_duration_s,
                    "released after only " + std::to_string(held) + " s");
        chk.require(held < mc.block_duration_s + tick_s,
                    "held " + std::to_string(held) +
                        " s, past the first eligible tick");
        chk.require(next.phase == PortPhase::kMonitoring,
                    "remove must return to monitoring");
      } else {
        chk.require(action == MitigationActionKind::kNone,
                    "tick produced an install");
        // Still blocked after a tick means the hold is not yet due.
        if (next.phase == PortPhase::kBlocked) {
          chk.require(now - next.blocked_since_s < mc.block_duration_s,
                      "blocked past the due tick without release");
        }
      }
      state = next;
      if (!chk.failures.empty()) return;
    }

    chk.require(installs > 100, "trace too quiet: only " +
                                    std::to_string(installs) + " installs");
    chk.require(installs - removes <= 1, "unbalanced install/remove counts");
  }
}

// ---------------------------------------------------------------------------
// 9. Prompt contract over 500 generated prompts
// ---------------------------------------------------------------------------

void c09_prompt_contract(Check& chk) {
  const RunConfig json_cfg = workspace().ensure_index(kJson);
  const RunConfig nlr_cfg = workspace().ensure_index(kNlr);

  const auto provider = make_embedding_provider(json_cfg.embedding);
  const IndexPair json_index =
      load_indices(json_cfg.index_dir, json_cfg.embedding.fingerprint());
  const IndexPair nlr_index =
      load_indices(nlr_cfg.index_dir, nlr_cfg.embedding.fingerprint());
  const std::vector<DatasetRecord> records = read_dataset(json_cfg.dataset_path);
  chk.require(records.size() >= 500, "dataset too small for prompt sweep");

  const std::string bare_instruction =
      "Only answer with one number, the label of the target interface "
      "status: 0 for Benign, 1 for Attack. Do not explain.";

  std::size_t bad = 0;
  std::string first_bad;
  for (int i = 0; i < 500; ++i) {
    const RepresentationKind kind = (i % 2 == 0) ? kJson : kNlr;
    const IndexPair& index = (kind == kJson) ? json_index : nlr_index;
    const DatasetRecord& rec = records[(i * 3) % records.size()];

    const RenderedSample rendered = render(rec.features, kind);
    const EmbeddingVector vec = provider->embed(rendered.text);
    const RetrievedContext ctx =
        retrieve_context(index, vec, rendered.text, json_cfg.neighbors_per_class);
    const Prompt prompt = build_prompt(ctx, kind);

    const std::string_view text = prompt.text;
    const std::string label0 = (kind == kJson) ? "\"output_label\": 0"
                                               : "The interface label is 0.";
    const std::string label1 = (kind == kJson) ? "\"output_label\": 1"
                                               : "The interface label is 1.";

    std::string why;
    if (prompt.example_count != 6) {
      why = "example_count != 6";
    } else if (text.rfind(kPromptTaskHeader, 0) != 0) {
      why = "task header not at start";
    } else if (text.find(bare_instruction) == std::string_view::npos) {
      why = "instruction sentence missing";
    } else if (count_occurrences(text, label0) != 3 ||
               count_occurrences(text, label1) != 3) {
      why = "does not carry exactly 3 benign and 3 attack examples";
    } else if (text.rfind(label0) > text.find(label1)) {
      why = "attack example precedes a benign example";
    } else {
      const std::size_t target = text.find("Target interface status:");
      if (target == std::string_view::npos) {
        why = "target section missing";
      } else if (text.find(label0, target) != std::string_view::npos ||
                 text.find(label1, target) != std::string_view::npos) {
        why = "label marker after the target section";
      }
    }
    if (!why.empty()) {
      ++bad;
      if (first_bad.empty()) {
        first_bad = "prompt " + std::to_string(i) + ": " + why;
      }
    }
  }
  chk.require(bad == 0, std::to_string(bad) + "/500 prompts violate the contract (first: " + first_bad + ")");
}

// ---------------------------------------------------------------------------
// 10. Seeded determinism across full pipeline reruns
// ---------------------------------------------------------------------------

void c10_determinism(Check& chk) {
  const fs::path root = workspace().root;
  std::vector<fs::path> metrics_files;
  std::vector<fs::path> run_roots;

  for (const char* run : {"rerun-a", "rerun-b"}) {
    RunConfig cfg;  // fresh defaults each run, same seed
    cfg.dataset_path = root / run / "dataset.jsonl";
    cfg.index_dir = root / run / "index";
    cfg.report_dir = root / run / "report";
    pipeline::generate_dataset(cfg);
    pipeline::build_index(cfg);
    const pipeline::EvaluationOutcome out = pipeline::evaluate(cfg);
    metrics_files.push_back(out.metrics_path);
    run_roots.push_back(root / run);
  }

  const auto compare = [&](const fs::path& a, const fs::path& b,
                           const std::string& what) {
    chk.require(slurp(a) == slurp(b), what + " differ between identical-seed runs");
  };
  compare(run_roots[0] / "dataset.jsonl", run_roots[1] / "dataset.jsonl",
          "dataset files");
  compare(run_roots[0] / "index" / "manifest.json",
          run_roots[1] / "index" / "manifest.json", "index manifests");
  compare(run_roots[0] / "index" / "records.jsonl",
          run_roots[1] / "index" / "records.jsonl", "index records");
  compare(run_roots[0] / "index" / "vectors.bin",
          run_roots[1] / "index" / "vectors.bin", "index vectors");
  compare(metrics_files[0], metrics_files[1], "metrics reports");
}

// ---------------------------------------------------------------------------
// Runner
// ---------------------------------------------------------------------------

struct Criterion {
  int number;
  const char* name;
  void (*fn)(Check&);
};

const Criterion kCriteria[] = {
    {1, "golden serialization: both renderings reproduce the reference strings", c01_golden_serialization},
    {2, "feature arithmetic matches the 4-decimal display rule", c02_feature_arithmetic},
    {3, "k-NN search agrees with brute force at D=32 and D=384", c03_retrieval_exactness},
    {4, "metric equations on the documented confusion counts", c04_metric_equations},
    {5, "oracle end-to-end accuracy/F1/AUC on the 2000-record desk corpus", c05_oracle_end_to_end},
    {6, "drop installs within two windows of onset; release at first tick >= 40 s", c06_mitigation_timing},
    {7, "mitigation halves post-detection packet-in load; victims see no attack traffic while blocked", c07_mitigation_efficacy},
    {8, "mitigation state machine holds its invariants on randomized traces", c08_state_machine},
    {9, "every generated prompt carries 3+3 labeled examples, header and instruction verbatim", c09_prompt_contract},
    {10, "identical-seed pipeline reruns are byte-identical", c10_determinism},
};

int run_criterion(const Criterion& criterion) {
  Check chk;
  const auto start = std::chrono::steady_clock::now();
  try {
    criterion.fn(chk);
  } catch (const std::exception& e) {
    chk.failures.push_back(std::string("unexpected exception: ") + e.what());
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  std::printf("[%s] %2d %s (%.2f s)\n", chk.failures.empty() ? "PASS" : "FAIL",
              criterion.number, criterion.name, elapsed);
  std::size_t shown = 0;
  for (const auto& failure : chk.failures) {
    if (shown++ == 8) {
      std::printf("      ... %zu further failures\n", chk.failures.size() - 8);
      break;
    }
    std::printf("      - %s\n", failure.c_str());
  }
  std::fflush(stdout);
  return chk.failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--list") {
      for (const auto& criterion : kCriteria) {
        std::printf("%2d %s\n", criterion.number, criterion.name);
      }
      return 0;
    }
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
      if (only < 1 || only > 10) {
        std::fprintf(stderr, "--only expects a criterion number in [1, 10]\n");
        return 2;
      }
      continue;
    }
    std::fprintf(stderr, "usage: %s [--only N] [--list]\n", argv[0]);
    return 2;
  }

  int failures = 0;
  for (const auto& criterion : kCriteria) {
    if (only != 0 && criterion.number != only) continue;
    failures += run_criterion(criterion);
  }
  if (only == 0) {
    std::printf("acceptance: %d/10 criteria passed\n", 10 - failures);
  }
  return failures;
}
