#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ragmon {

using EmbeddingVector = std::vector<float>;

enum class EmbeddingProviderKind { kDeterministicTest, kRemote };

struct EmbeddingProviderConfig {
  EmbeddingProviderKind kind = EmbeddingProviderKind::kDeterministicTest;
  std::size_t dimension = 64;

  // Test provider.
  std::uint64_t seed = 7;

  // Remote provider. The auth token is read from RAGMON_EMBED_API_KEY, never
  // stored in config.
  std::string endpoint;
  std::string model = "paraphrase-MiniLM-L6-v2";
  double timeout_s = 30.0;
  std::size_t batch_size = 64;
  std::size_t max_in_flight = 4;

  // L2-normalize remote vectors before use (squared L2 then ranks like
  // cosine). The test provider normalizes by construction.
  bool normalize = false;

  // Identity string persisted with an index; a mismatch at load time means
  // the stored vectors were produced by a different provider.
  std::string fingerprint() const;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  // Rejects empty text. Result has exactly dimension() components.
  virtual EmbeddingVector embed(std::string_view text) = 0;

  // Order-stable: result[i] embeds texts[i]. Any failure aborts the batch.
  virtual std::vector<EmbeddingVector> embed_batch(
      std::span<const std::string> texts);

  virtual std::size_t dimension() const = 0;
};

// Seeded hashing embedder, fully deterministic:
//  - word tokens ([A-Za-z_]+ runs): bucket fnv1a64(token, seed) % D,
//    contribution +1 or -1 from the hash's top bit;
//  - numeric tokens ([0-9]+ with optional .[0-9]+ tail), taken in order of
//    appearance: the i-th numeric token contributes log1p(value) to bucket
//    fnv1a64("#i", seed) % D, so each rendered quantity lands in a fixed
//    per-position bucket;
//  - final vector is L2-normalized (zero vector stays zero).
class DeterministicTestEmbedder final : public EmbeddingProvider {
 public:
  DeterministicTestEmbedder(std::size_t dimension, std::uint64_t seed);

  EmbeddingVector embed(std::string_view text) override;
  std::size_t dimension() const override { return dimension_; }

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
};

// Client for an OpenAI-style /embeddings endpoint. Splits batches into
// chunks of config.batch_size and issues up to config.max_in_flight chunk
// requests concurrently; results are reassembled in input order.
class RemoteEmbeddingClient final : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingClient(EmbeddingProviderConfig config);

  EmbeddingVector embed(std::string_view text) override;
  std::vector<EmbeddingVector> embed_batch(
      std::span<const std::string> texts) override;
  std::size_t dimension() const override { return config_.dimension; }

 private:
  std::vector<EmbeddingVector> embed_chunk(std::span<const std::string> texts);

  EmbeddingProviderConfig config_;
};

std::unique_ptr<EmbeddingProvider> make_embedding_provider(
    const EmbeddingProviderConfig& config);

}  // namespace ragmon
