#include "ragmon/dataset.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ragmon {

namespace {

nlohmann::ordered_json direction_to_json(const DirectionStats& d) {
  return nlohmann::ordered_json{{"packets", d.packets},
                                {"bytes", d.bytes},
                                {"packets_per_second", d.packets_per_second},
                                {"bytes_per_second", d.bytes_per_second},
                                {"avg_packet_size", d.avg_packet_size}};
}

DirectionStats direction_from_json(const nlohmann::json& j) {
  DirectionStats d;
  d.packets = j.at("packets").get<std::uint64_t>();
  d.bytes = j.at("bytes").get<std::uint64_t>();
  d.packets_per_second = j.at("packets_per_second").get<double>();
  d.bytes_per_second = j.at("bytes_per_second").get<double>();
  d.avg_packet_size = j.at("avg_packet_size").get<double>();
  return d;
}

}  // namespace

void write_dataset(std::span<const DatasetRecord> records,
                   const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) {
    nlohmann::ordered_json j{
        {"id", r.id},
        {"label", r.label},
        {"features",
         nlohmann::ordered_json{{"received", direction_to_json(r.features.received)},
                                {"sent", direction_to_json(r.features.sent)}}},
        {"meta",
         nlohmann::ordered_json{{"scenario", r.meta.scenario},
                                {"switch", r.meta.switch_id},
                                {"port", r.meta.port},
                                {"window", r.meta.window},
                                {"elapsed_s", r.meta.elapsed_s}}}};
    out << j.dump() << "\n";
  }
}

std::vector<DatasetRecord> read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<DatasetRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      DatasetRecord r;
      r.id = j.at("id").get<std::int64_t>();
      r.label = j.at("label").get<int>();
      if (r.label != 0 && r.label != 1) {
        throw std::runtime_error("label must be 0 or 1");
      }
      r.features.received = direction_from_json(j.at("features").at("received"));
      r.features.sent = direction_from_json(j.at("features").at("sent"));
      const auto& meta = j.at("meta");
      r.meta.scenario = meta.at("scenario").get<std::string>();
      r.meta.switch_id = meta.at("switch").get<int>();
      r.meta.port = meta.at("port").get<std::string>();
      r.meta.window = meta.at("window").get<std::int64_t>();
      r.meta.elapsed_s = meta.at("elapsed_s").get<double>();
      records.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + " line " +
                               std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

std::vector<DatasetRecord> to_dataset_records(
    std::span<const TrafficSample> samples) {
  std::vector<DatasetRecord> records;
  records.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    DatasetRecord r;
    r.id = static_cast<std::int64_t>(i);
    r.label = samples[i].label;
    r.features = samples[i].features;
    r.meta = samples[i].meta;
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace ragmon
