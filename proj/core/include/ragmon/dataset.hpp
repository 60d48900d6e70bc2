#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ragmon/fabric_sim.hpp"
#include "ragmon/retrieval.hpp"
#include "ragmon/telemetry.hpp"

namespace ragmon {

struct DatasetRecord {
  std::int64_t id = 0;
  int label = 0;
  InterfaceFeatures features;
  SampleMetadata meta;
};

// JSONL, one record per line, keys in fixed order. Doubles round-trip
// exactly, so write/read/write is byte-stable.
void write_dataset(std::span<const DatasetRecord> records,
                   const std::filesystem::path& path);

// Malformed lines raise with the 1-based line number.
std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path);

std::vector<DatasetRecord> to_dataset_records(
    std::span<const TrafficSample> samples);

}  // namespace ragmon
