#include "ragmon/retrieval.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "ragmon/errors.hpp"
#include "ragmon/rng.hpp"

namespace ragmon {

ClassIndex::ClassIndex(int label, std::size_t dimension)
    : label_(label), dimension_(dimension) {
  if (label != 0 && label != 1) {
    throw std::invalid_argument("ClassIndex: label must be 0 or 1");
  }
  if (dimension == 0) {
    throw std::invalid_argument("ClassIndex: dimension must be positive");
  }
}

void ClassIndex::add(RetrievalRecord record) {
  if (record.label != label_) {
    throw std::invalid_argument("ClassIndex: record label does not match index");
  }
  if (record.vector.size() != dimension_) {
    throw std::invalid_argument("ClassIndex: vector dimension mismatch");
  }
  flat_.insert(flat_.end(), record.vector.begin(), record.vector.end());
  records_.push_back(std::move(record));
}

std::vector<SearchHit> ClassIndex::search(std::span<const float> query,
                                          std::size_t k) const {
  if (query.size() != dimension_) {
    throw std::invalid_argument("search: query dimension mismatch");
  }
  if (k == 0 || k > records_.size()) {
    throw std::invalid_argument("search: k must be in [1, size()]");
  }

  // Keep the k best under (distance, id) in a max-heap; everything stays
  // exact, the heap only caps memory at k.
  auto before = [](const SearchHit& a, const SearchHit& b) {
    return a.distance < b.distance ||
           (a.distance == b.distance && a.id < b.id);
  };
  std::priority_queue<SearchHit, std::vector<SearchHit>, decltype(before)> heap(
      before);
  for (std::size_t row = 0; row < records_.size(); ++row) {
    const float* v = flat_.data() + row * dimension_;
    double dist = 0.0;
    for (std::size_t d = 0; d < dimension_; ++d) {
      const double diff = static_cast<double>(query[d]) - v[d];
      dist += diff * diff;
    }
    SearchHit hit{records_[row].id, dist};
    if (heap.size() < k) {
      heap.push(hit);
    } else if (before(hit, heap.top())) {
      heap.pop();
      heap.push(hit);
    }
  }

  std::vector<SearchHit> hits;
  hits.reserve(k);
  while (!heap.empty()) {
    hits.push_back(heap.top());
    heap.pop();
  }
  std::reverse(hits.begin(), hits.end());
  return hits;
}

const RetrievalRecord& ClassIndex::record(std::int64_t id) const {
  for (const auto& r : records_) {
    if (r.id == id) return r;
  }
  throw std::out_of_range("ClassIndex: no record with id " + std::to_string(id));
}

IndexPair build_indices(std::vector<RetrievalRecord> records,
                        std::size_t dimension) {
  IndexPair pair{ClassIndex(0, dimension), ClassIndex(1, dimension)};
  for (auto& record : records) {
    if (record.label == 0) {
      pair.benign.add(std::move(record));
    } else if (record.label == 1) {
      pair.attack.add(std::move(record));
    } else {
      throw std::invalid_argument("build_indices: label must be 0 or 1");
    }
  }
  if (pair.benign.size() == 0 || pair.attack.size() == 0) {
    throw std::invalid_argument(
        "build_indices: both classes need at least one record");
  }
  return pair;
}

RetrievedContext retrieve_context(const IndexPair& indices,
                                  std::span<const float> query,
                                  std::string query_text, std::size_t k) {
  RetrievedContext ctx;
  ctx.query_text = std::move(query_text);
  for (const ClassIndex* index : {&indices.benign, &indices.attack}) {
    auto& side = index->label() == 0 ? ctx.benign : ctx.attack;
    for (const auto& hit : index->search(query, k)) {
      side.push_back({&index->record(hit.id), hit.distance});
    }
  }
  return ctx;
}

SplitIndices split_dataset(std::span<const int> labels, double ratio,
                           std::uint64_t seed, std::size_t min_class_support) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("split_dataset: ratio must be in (0, 1)");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int label = labels[i];
    if (label != 0 && label != 1) {
      throw std::invalid_argument("split_dataset: labels must be 0 or 1");
    }
    by_class[label].push_back(i);
  }
  for (int label : {0, 1}) {
    if (by_class[label].size() < min_class_support) {
      throw std::invalid_argument(
          "split_dataset: class " + std::to_string(label) + " has only " +
          std::to_string(by_class[label].size()) + " samples, need " +
          std::to_string(min_class_support));
    }
  }

  std::mt19937_64 rng(seed);
  SplitIndices split;
  for (int label : {0, 1}) {
    auto& pool = by_class[label];
    shuffle_inplace(pool, rng);
    const auto keep =
        static_cast<std::size_t>(ratio * static_cast<double>(pool.size()));
    split.retrieval.insert(split.retrieval.end(), pool.begin(),
                           pool.begin() + keep);
    split.test.insert(split.test.end(), pool.begin() + keep, pool.end());
  }
  std::sort(split.retrieval.begin(), split.retrieval.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

namespace {

nlohmann::ordered_json meta_to_json(const SampleMetadata& meta) {
  return nlohmann::ordered_json{{"scenario", meta.scenario},
                                {"switch", meta.switch_id},
                                {"port", meta.port},
                                {"window", meta.window},
                                {"elapsed_s", meta.elapsed_s}};
}

SampleMetadata meta_from_json(const nlohmann::json& j) {
  SampleMetadata meta;
  meta.scenario = j.at("scenario").get<std::string>();
  meta.switch_id = j.at("switch").get<int>();
  meta.port = j.at("port").get<std::string>();
  meta.window = j.at("window").get<std::int64_t>();
  meta.elapsed_s = j.at("elapsed_s").get<double>();
  return meta;
}

void write_records_jsonl(const std::vector<RetrievalRecord>& records,
                         std::ofstream& out) {
  for (const auto& r : records) {
    nlohmann::ordered_json j{{"id", r.id},
                             {"label", r.label},
                             {"text", r.rendered_text},
                             {"meta", meta_to_json(r.meta)}};
    out << j.dump() << "\n";
  }
}

}  // namespace

void save_indices(const IndexPair& indices, const IndexManifest& manifest,
                  const std::filesystem::path& dir) {
  if (manifest.dimension != indices.benign.dimension() ||
      manifest.dimension != indices.attack.dimension()) {
    throw std::invalid_argument("save_indices: manifest dimension mismatch");
  }
  std::filesystem::create_directories(dir);

  nlohmann::ordered_json m{
      {"dimension", manifest.dimension},
      {"metric", manifest.metric},
      {"provider_fingerprint", manifest.provider_fingerprint},
      {"representation", to_string(manifest.kind)},
      {"split_ratio", manifest.split_ratio},
      {"split_seed", manifest.split_seed},
      {"benign_count", indices.benign.size()},
      {"attack_count", indices.attack.size()}};
  std::ofstream mf(dir / "manifest.json", std::ios::binary);
  if (!mf) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  mf << m.dump(2) << "\n";

  std::ofstream rf(dir / "records.jsonl", std::ios::binary);
  if (!rf) throw std::runtime_error("cannot write " + (dir / "records.jsonl").string());
  write_records_jsonl(indices.benign.records(), rf);
  write_records_jsonl(indices.attack.records(), rf);

  std::ofstream vf(dir / "vectors.bin", std::ios::binary);
  if (!vf) throw std::runtime_error("cannot write " + (dir / "vectors.bin").string());
  for (const ClassIndex* index : {&indices.benign, &indices.attack}) {
    for (const auto& r : index->records()) {
      vf.write(reinterpret_cast<const char*>(r.vector.data()),
               static_cast<std::streamsize>(r.vector.size() * sizeof(float)));
    }
  }
}

IndexManifest load_manifest(const std::filesystem::path& dir) {
  std::ifstream mf(dir / "manifest.json", std::ios::binary);
  if (!mf) {
    throw std::runtime_error("cannot read " + (dir / "manifest.json").string());
  }
  nlohmann::json m = nlohmann::json::parse(mf);
  IndexManifest manifest;
  manifest.dimension = m.at("dimension").get<std::size_t>();
  manifest.metric = m.at("metric").get<std::string>();
  manifest.provider_fingerprint = m.at("provider_fingerprint").get<std::string>();
  manifest.kind = representation_kind_from_string(
      m.at("representation").get<std::string>());
  manifest.split_ratio = m.at("split_ratio").get<double>();
  manifest.split_seed = m.at("split_seed").get<std::uint64_t>();
  manifest.benign_count = m.at("benign_count").get<std::size_t>();
  manifest.attack_count = m.at("attack_count").get<std::size_t>();
  return manifest;
}

IndexPair load_indices(const std::filesystem::path& dir,
                       const std::string& expected_fingerprint,
                       IndexManifest* manifest_out) {
  const IndexManifest manifest = load_manifest(dir);
  if (manifest.provider_fingerprint != expected_fingerprint) {
    throw StaleIndexError("index at " + dir.string() + " was built with '" +
                          manifest.provider_fingerprint +
                          "', current provider is '" + expected_fingerprint +
                          "'");
  }

  std::ifstream rf(dir / "records.jsonl", std::ios::binary);
  if (!rf) {
    throw std::runtime_error("cannot read " + (dir / "records.jsonl").string());
  }
  std::ifstream vf(dir / "vectors.bin", std::ios::binary);
  if (!vf) {
    throw std::runtime_error("cannot read " + (dir / "vectors.bin").string());
  }

  std::vector<RetrievalRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(rf, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("records.jsonl line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    RetrievalRecord r;
    r.id = j.at("id").get<std::int64_t>();
    r.label = j.at("label").get<int>();
    r.rendered_text = j.at("text").get<std::string>();
    r.meta = meta_from_json(j.at("meta"));
    r.vector.resize(manifest.dimension);
    vf.read(reinterpret_cast<char*>(r.vector.data()),
            static_cast<std::streamsize>(manifest.dimension * sizeof(float)));
    if (vf.gcount() !=
        static_cast<std::streamsize>(manifest.dimension * sizeof(float))) {
      throw std::runtime_error("vectors.bin is shorter than records.jsonl");
    }
    records.push_back(std::move(r));
  }
  if (records.size() != manifest.benign_count + manifest.attack_count) {
    throw std::runtime_error("records.jsonl does not match manifest counts");
  }
  char extra;
  if (vf.read(&extra, 1)) {
    throw std::runtime_error("vectors.bin is longer than records.jsonl");
  }

  auto pair = build_indices(std::move(records), manifest.dimension);
  if (pair.benign.size() != manifest.benign_count ||
      pair.attack.size() != manifest.attack_count) {
    throw std::runtime_error("index class counts do not match manifest");
  }
  if (manifest_out) *manifest_out = manifest;
  return pair;
}

}  // namespace ragmon
