#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ragmon/embedding.hpp"
#include "ragmon/representation.hpp"

namespace ragmon {

struct SampleMetadata {
  std::string scenario;
  int switch_id = 0;
  std::string port;
  std::int64_t window = 0;
  double elapsed_s = 10.0;
};

struct RetrievalRecord {
  std::int64_t id = 0;
  int label = 0;
  std::string rendered_text;  // labeled rendering, prompt-ready
  EmbeddingVector vector;
  SampleMetadata meta;
};

struct SearchHit {
  std::int64_t id = 0;
  double distance = 0.0;  // squared L2
};

// Exact flat index over one class. Search scans every stored vector;
// ordering is lexicographic on (distance, id), so ties resolve to the
// lower record id and results are fully deterministic.
class ClassIndex {
 public:
  ClassIndex(int label, std::size_t dimension);

  // Record must carry this index's label and a dimension-sized vector.
  void add(RetrievalRecord record);

  // k must be in [1, size()]. Hits come back ascending by (distance, id).
  std::vector<SearchHit> search(std::span<const float> query,
                                std::size_t k) const;

  const RetrievalRecord& record(std::int64_t id) const;
  const std::vector<RetrievalRecord>& records() const { return records_; }

  int label() const { return label_; }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return records_.size(); }

 private:
  int label_;
  std::size_t dimension_;
  std::vector<RetrievalRecord> records_;
  std::vector<float> flat_;  // row-major copy scanned by search
};

struct IndexPair {
  ClassIndex benign;
  ClassIndex attack;
};

// Partitions records by label into the two class indexes. Every record goes
// to exactly one index; either class being empty is an error.
IndexPair build_indices(std::vector<RetrievalRecord> records,
                        std::size_t dimension);

struct ScoredRecord {
  const RetrievalRecord* record = nullptr;
  double distance = 0.0;
};

// Per-class nearest neighbours for one query, plus the query's own
// (unlabeled) rendering carried along for prompt assembly. The record
// pointers borrow from the indexes, which must outlive the context.
struct RetrievedContext {
  std::vector<ScoredRecord> benign;
  std::vector<ScoredRecord> attack;
  std::string query_text;
};

RetrievedContext retrieve_context(const IndexPair& indices,
                                  std::span<const float> query,
                                  std::string query_text, std::size_t k = 3);

struct SplitIndices {
  std::vector<std::size_t> retrieval;
  std::vector<std::size_t> test;
};

// Deterministic stratified split. Per class, floor(ratio * count) samples go
// to the retrieval side after a seeded shuffle; both outputs come back
// sorted ascending. Requires 0 < ratio < 1, labels in {0,1}, and at least
// min_class_support samples of each class.
SplitIndices split_dataset(std::span<const int> labels, double ratio,
                           std::uint64_t seed,
                           std::size_t min_class_support = 4);

struct IndexManifest {
  std::size_t dimension = 0;
  std::string metric = "l2_squared";
  std::string provider_fingerprint;
  RepresentationKind kind = RepresentationKind::kStructuredJson;
  double split_ratio = 0.8;
  std::uint64_t split_seed = 1;
  std::size_t benign_count = 0;
  std::size_t attack_count = 0;
};

// Layout under dir: manifest.json, records.jsonl (id/label/text/meta in
// index order, benign then attack), vectors.bin (raw little-endian float32
// rows in the same order).
void save_indices(const IndexPair& indices, const IndexManifest& manifest,
                  const std::filesystem::path& dir);

IndexManifest load_manifest(const std::filesystem::path& dir);

// Rejects (StaleIndexError) when the stored fingerprint differs from
// expected_fingerprint, so vectors from one provider are never searched
// with queries from another.
IndexPair load_indices(const std::filesystem::path& dir,
                       const std::string& expected_fingerprint,
                       IndexManifest* manifest_out = nullptr);

}  // namespace ragmon
