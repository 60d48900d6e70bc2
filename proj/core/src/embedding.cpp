#include "ragmon/embedding.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "ragmon/errors.hpp"
#include "ragmon/rng.hpp"

namespace ragmon {

std::string EmbeddingProviderConfig::fingerprint() const {
  std::string fp;
  if (kind == EmbeddingProviderKind::kDeterministicTest) {
    fp = "test:d=" + std::to_string(dimension) + ":seed=" + std::to_string(seed);
  } else {
    fp = "remote:d=" + std::to_string(dimension) + ":model=" + model;
  }
  fp += normalize ? ":norm=1" : ":norm=0";
  return fp;
}

std::vector<EmbeddingVector> EmbeddingProvider::embed_batch(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& text : texts) out.push_back(embed(text));
  return out;
}

namespace {

void l2_normalize(std::vector<double>& acc) {
  double sq = 0.0;
  for (double v : acc) sq += v * v;
  if (sq <= 0.0) return;
  const double inv = 1.0 / std::sqrt(sq);
  for (double& v : acc) v *= inv;
}

bool word_char(unsigned char c) { return std::isalpha(c) != 0 || c == '_'; }

}  // namespace

DeterministicTestEmbedder::DeterministicTestEmbedder(std::size_t dimension,
                                                     std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
  if (dimension_ == 0) {
    throw std::invalid_argument("embedding dimension must be positive");
  }
}

EmbeddingVector DeterministicTestEmbedder::embed(std::string_view text) {
  if (text.empty()) {
    throw std::invalid_argument("embed: empty text");
  }
  std::vector<double> acc(dimension_, 0.0);
  std::size_t numeric_ordinal = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (word_char(c)) {
      const std::size_t start = i;
      while (i < text.size() && word_char(static_cast<unsigned char>(text[i])))
        ++i;
      const std::uint64_t h = fnv1a64(text.substr(start, i - start), seed_);
      acc[h % dimension_] += (h >> 63) ? -1.0 : 1.0;
    } else if (std::isdigit(c) != 0) {
      const std::size_t start = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])))
        ++i;
      if (i + 1 < text.size() && text[i] == '.' &&
          std::isdigit(static_cast<unsigned char>(text[i + 1])) != 0) {
        ++i;
        while (i < text.size() &&
               std::isdigit(static_cast<unsigned char>(text[i])))
          ++i;
      }
      const double value =
          std::strtod(std::string(text.substr(start, i - start)).c_str(),
                      nullptr);
      const std::uint64_t h =
          fnv1a64("#" + std::to_string(numeric_ordinal), seed_);
      acc[h % dimension_] += std::log1p(value);
      ++numeric_ordinal;
    } else {
      ++i;
    }
  }
  l2_normalize(acc);
  EmbeddingVector out(dimension_);
  for (std::size_t d = 0; d < dimension_; ++d)
    out[d] = static_cast<float>(acc[d]);
  return out;
}

namespace {

// "http://host:port/prefix" -> {"http://host:port", "/prefix"}.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  const auto scheme = endpoint.find("://");
  if (scheme == std::string::npos) {
    throw std::invalid_argument("endpoint must include a scheme: " + endpoint);
  }
  const auto path = endpoint.find('/', scheme + 3);
  if (path == std::string::npos) return {endpoint, ""};
  std::string prefix = endpoint.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {endpoint.substr(0, path), prefix};
}

httplib::Headers auth_headers(const char* env_var) {
  httplib::Headers headers;
  if (const char* token = std::getenv(env_var); token && *token) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }
  return headers;
}

}  // namespace

RemoteEmbeddingClient::RemoteEmbeddingClient(EmbeddingProviderConfig config)
    : config_(std::move(config)) {
  if (config_.endpoint.empty()) {
    throw std::invalid_argument("remote embedding provider needs an endpoint");
  }
  if (config_.dimension == 0 || config_.batch_size == 0) {
    throw std::invalid_argument("embedding dimension and batch size must be positive");
  }
}

EmbeddingVector RemoteEmbeddingClient::embed(std::string_view text) {
  const std::string one(text);
  return embed_chunk(std::span<const std::string>(&one, 1)).front();
}

std::vector<EmbeddingVector> RemoteEmbeddingClient::embed_batch(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out(texts.size());
  const std::size_t chunk = config_.batch_size;
  const std::size_t workers = std::max<std::size_t>(1, config_.max_in_flight);
  std::size_t next = 0;
  while (next < texts.size()) {
    // One wave of up to `workers` chunk requests in flight.
    std::vector<std::pair<std::size_t, std::future<std::vector<EmbeddingVector>>>>
        wave;
    for (std::size_t w = 0; w < workers && next < texts.size(); ++w) {
      const std::size_t begin = next;
      const std::size_t count = std::min(chunk, texts.size() - begin);
      next += count;
      wave.emplace_back(begin, std::async(std::launch::async, [this, texts,
                                                               begin, count] {
                          return embed_chunk(texts.subspan(begin, count));
                        }));
    }
    for (auto& [begin, fut] : wave) {
      auto vectors = fut.get();  // any failure aborts the whole batch
      for (std::size_t j = 0; j < vectors.size(); ++j)
        out[begin + j] = std::move(vectors[j]);
    }
  }
  return out;
}

std::vector<EmbeddingVector> RemoteEmbeddingClient::embed_chunk(
    std::span<const std::string> texts) {
  for (const auto& text : texts) {
    if (text.empty()) throw std::invalid_argument("embed: empty text");
  }
  const auto [base, prefix] = split_endpoint(config_.endpoint);
  httplib::Client client(base);
  client.set_connection_timeout(static_cast<int>(config_.timeout_s), 0);
  client.set_read_timeout(static_cast<int>(config_.timeout_s), 0);

  nlohmann::json request{{"model", config_.model},
                         {"input", nlohmann::json::array()}};
  for (const auto& text : texts) request["input"].push_back(text);

  auto res = client.Post(prefix + "/embeddings", auth_headers("RAGMON_EMBED_API_KEY"),
                         request.dump(), "application/json");
  if (!res) {
    throw RemoteUnavailableError("embedding endpoint unreachable: " +
                                 httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw RemoteUnavailableError("embedding endpoint returned HTTP " +
                                 std::to_string(res->status));
  }

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw UnparseableReplyError(std::string("embedding reply is not JSON: ") +
                                e.what());
  }
  if (!reply.contains("data") || !reply["data"].is_array() ||
      reply["data"].size() != texts.size()) {
    throw UnparseableReplyError("embedding reply missing data for the batch");
  }

  std::vector<EmbeddingVector> out(texts.size());
  std::vector<bool> seen(texts.size(), false);
  for (std::size_t pos = 0; pos < reply["data"].size(); ++pos) {
    const auto& item = reply["data"][pos];
    const std::size_t slot =
        item.contains("index") ? item["index"].get<std::size_t>() : pos;
    if (slot >= texts.size() || seen[slot] || !item.contains("embedding") ||
        !item["embedding"].is_array()) {
      throw UnparseableReplyError("embedding reply has malformed data items");
    }
    const auto& values = item["embedding"];
    if (values.size() != config_.dimension) {
      throw UnparseableReplyError(
          "embedding dimension mismatch: expected " +
          std::to_string(config_.dimension) + ", got " +
          std::to_string(values.size()));
    }
    EmbeddingVector v(config_.dimension);
    for (std::size_t d = 0; d < config_.dimension; ++d)
      v[d] = values[d].get<float>();
    if (config_.normalize) {
      double sq = 0.0;
      for (float x : v) sq += static_cast<double>(x) * x;
      if (sq > 0.0) {
        const auto inv = static_cast<float>(1.0 / std::sqrt(sq));
        for (float& x : v) x *= inv;
      }
    }
    out[slot] = std::move(v);
    seen[slot] = true;
  }
  return out;
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(
    const EmbeddingProviderConfig& config) {
  if (config.kind == EmbeddingProviderKind::kDeterministicTest) {
    return std::make_unique<DeterministicTestEmbedder>(config.dimension,
                                                       config.seed);
  }
  return std::make_unique<RemoteEmbeddingClient>(config);
}

}  // namespace ragmon
