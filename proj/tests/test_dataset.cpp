#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "ragmon/dataset.hpp"

namespace {

using namespace ragmon;
namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag) {
    path = fs::temp_directory_path() /
           (std::string("ragmon_ds_") + tag + "_" +
            std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

DatasetRecord sample_record(std::int64_t id, int label) {
  DatasetRecord r;
  r.id = id;
  r.label = label;
  r.features.received.packets = 4932;
  r.features.received.bytes = 7084704;
  // Values with long decimal expansions to exercise exact round-tripping.
  r.features.received.packets_per_second = 493.2000000000001;
  r.features.received.bytes_per_second = 708470.4;
  r.features.received.avg_packet_size = 1436.5785888888887;
  r.features.sent.packets = 1;
  r.features.sent.bytes = 98;
  r.features.sent.packets_per_second = 0.1;
  r.features.sent.bytes_per_second = 9.8;
  r.features.sent.avg_packet_size = 98.0;
  r.meta.scenario = "attack100k";
  r.meta.switch_id = 1;
  r.meta.port = "s1-eth2";
  r.meta.window = 13;
  r.meta.elapsed_s = 10.0;
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("records round-trip exactly, including long decimal expansions") {
    TempDir dir("roundtrip");
    std::vector<DatasetRecord> records{sample_record(0, 0), sample_record(1, 1)};
    const auto path = dir.path / "dataset.jsonl";
    write_dataset(records, path);

    const auto loaded = read_dataset(path);
    REQUIRE(loaded.size() == 2);
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(loaded[i].id == records[i].id);
      CHECK(loaded[i].label == records[i].label);
      // Bitwise-equal doubles, not approximately equal.
      CHECK(loaded[i].features.received.packets_per_second ==
            records[i].features.received.packets_per_second);
      CHECK(loaded[i].features.received.avg_packet_size ==
            records[i].features.received.avg_packet_size);
      CHECK(loaded[i].features.sent.bytes_per_second ==
            records[i].features.sent.bytes_per_second);
      CHECK(loaded[i].features.received.packets ==
            records[i].features.received.packets);
      CHECK(loaded[i].meta.scenario == records[i].meta.scenario);
      CHECK(loaded[i].meta.switch_id == records[i].meta.switch_id);
      CHECK(loaded[i].meta.port == records[i].meta.port);
      CHECK(loaded[i].meta.window == records[i].meta.window);
      CHECK(loaded[i].meta.elapsed_s == records[i].meta.elapsed_s);
    }

    // write/read/write is byte-stable.
    const auto again = dir.path / "again.jsonl";
    write_dataset(loaded, again);
    CHECK(slurp(path) == slurp(again));
  }

  TEST_CASE("one JSON object per line with fixed key order") {
    TempDir dir("layout");
    const auto path = dir.path / "dataset.jsonl";
    write_dataset(std::vector<DatasetRecord>{sample_record(7, 1)}, path);
    const auto text = slurp(path);
    CHECK(text.rfind("{\"id\":7,\"label\":1,\"features\":{\"received\":{\"packets\":4932,",
                     0) == 0);
    CHECK(text.back() == '\n');
    CHECK(text.find("\"meta\":{\"scenario\":\"attack100k\",\"switch\":1,"
                    "\"port\":\"s1-eth2\",\"window\":13,\"elapsed_s\":10.0") !=
          std::string::npos);
  }

  TEST_CASE("malformed lines and bad labels raise with the line number") {
    TempDir dir("errors");
    const auto path = dir.path / "broken.jsonl";
    {
      std::ofstream out(path);
      write_dataset(std::vector<DatasetRecord>{sample_record(0, 0)}, path);
      out.close();
      std::ofstream append(path, std::ios::app);
      append << "{not json}\n";
    }
    try {
      read_dataset(path);
      FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }

    const auto bad_label = dir.path / "badlabel.jsonl";
    {
      auto r = sample_record(0, 0);
      write_dataset(std::vector<DatasetRecord>{r}, bad_label);
      auto text = slurp(bad_label);
      const auto at = text.find("\"label\":0");
      REQUIRE(at != std::string::npos);
      text.replace(at, 9, "\"label\":2");
      std::ofstream out(bad_label, std::ios::binary);
      out << text;
    }
    try {
      read_dataset(bad_label);
      FAIL("expected a label error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }

    const auto missing_key = dir.path / "missing.jsonl";
    {
      std::ofstream out(missing_key);
      out << "{\"id\":0,\"label\":0}\n";
    }
    CHECK_THROWS_AS(read_dataset(missing_key), std::runtime_error);
    CHECK_THROWS_AS(read_dataset(dir.path / "absent.jsonl"), std::runtime_error);
  }

  TEST_CASE("to_dataset_records assigns consecutive ids from zero") {
    std::vector<TrafficSample> samples(3);
    samples[0].label = 0;
    samples[1].label = 1;
    samples[2].label = 0;
    samples[1].meta.port = "s2-eth2";
    const auto records = to_dataset_records(samples);
    REQUIRE(records.size() == 3);
    for (std::size_t i = 0; i < records.size(); ++i) {
      CHECK(records[i].id == static_cast<std::int64_t>(i));
      CHECK(records[i].label == samples[i].label);
    }
    CHECK(records[1].meta.port == "s2-eth2");
  }
}
