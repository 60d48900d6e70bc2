#include <benchmark/benchmark.h>

#include <random>

#include "ragmon/classifier.hpp"
#include "ragmon/embedding.hpp"
#include "ragmon/representation.hpp"
#include "ragmon/retrieval.hpp"
#include "ragmon/rng.hpp"
#include "ragmon/telemetry.hpp"

namespace {

ragmon::InterfaceFeatures sample_features() {
  ragmon::CounterDelta d;
  d.elapsed_s = 10.0;
  d.rx_packets = 4932;
  d.rx_bytes = 7084704;
  d.tx_packets = 1;
  d.tx_bytes = 98;
  return ragmon::compute_features(d);
}

std::vector<float> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::vector<float> v(dim);
  for (auto& x : v) {
    x = static_cast<float>(ragmon::uniform_real(rng, -1.0, 1.0));
  }
  return v;
}

ragmon::ClassIndex filled_index(int label, std::size_t dim, std::size_t n) {
  std::mt19937_64 rng(17 + label);
  ragmon::ClassIndex index(label, dim);
  for (std::size_t i = 0; i < n; ++i) {
    ragmon::RetrievalRecord r;
    r.id = static_cast<std::int64_t>(i);
    r.label = label;
    r.vector = random_vector(rng, dim);
    index.add(std::move(r));
  }
  return index;
}

void BM_RenderJson(benchmark::State& state) {
  const auto features = sample_features();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ragmon::render_json(features, 0).text);
  }
}
BENCHMARK(BM_RenderJson);

void BM_Embed(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  ragmon::DeterministicTestEmbedder embedder(dim, 7);
  const auto text = ragmon::render_json(sample_features(), 0).text;
  for (auto _ : state) {
    benchmark::DoNotOptimize(embedder.embed(text));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Embed)->Arg(64)->Arg(384);

void BM_IndexSearch(benchmark::State& state) {
  const std::size_t dim = 64;
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto index = filled_index(0, dim, n);
  std::mt19937_64 rng(99);
  const auto query = random_vector(rng, dim);
  for (auto _ : state) {
    benchmark::DoNotOptimize(index.search(query, 3));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_IndexSearch)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_OracleDecision(benchmark::State& state) {
  const std::size_t dim = 64;
  const auto benign = filled_index(0, dim, 1000);
  const auto attack = filled_index(1, dim, 1000);
  std::mt19937_64 rng(5);
  const auto query = random_vector(rng, dim);
  const ragmon::IndexPair indices{benign, attack};
  for (auto _ : state) {
    auto ctx = ragmon::retrieve_context(indices, query, "q", 3);
    benchmark::DoNotOptimize(ragmon::classify_oracle(ctx));
  }
}
BENCHMARK(BM_OracleDecision);

// Labeled context for prompt assembly; the oracle path above skips the text.
ragmon::RetrievedContext labeled_context(const ragmon::IndexPair& indices,
                                         std::span<const float> query,
                                         std::string query_text) {
  return ragmon::retrieve_context(indices, query, std::move(query_text), 3);
}

void BM_BuildPrompt(benchmark::State& state) {
  const std::size_t dim = 64;
  std::mt19937_64 rng(23);
  ragmon::IndexPair indices{ragmon::ClassIndex(0, dim),
                            ragmon::ClassIndex(1, dim)};
  for (int label : {0, 1}) {
    auto& index = (label == 0) ? indices.benign : indices.attack;
    for (std::int64_t i = 0; i < 1000; ++i) {
      ragmon::RetrievalRecord r;
      r.id = i;
      r.label = label;
      r.rendered_text = ragmon::render_json(sample_features(), label).text;
      r.vector = random_vector(rng, dim);
      index.add(std::move(r));
    }
  }
  const auto query = random_vector(rng, dim);
  const auto query_text = ragmon::render_json(sample_features()).text;
  const auto ctx = labeled_context(indices, query, query_text);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ragmon::build_prompt(ctx, ragmon::RepresentationKind::kStructuredJson));
  }
}
BENCHMARK(BM_BuildPrompt);

// One full monitoring-window pass per port: features -> render -> embed ->
// retrieve -> oracle decision, against a desk-scale index pair.
void BM_WindowPass(benchmark::State& state) {
  const std::size_t dim = 64;
  ragmon::DeterministicTestEmbedder embedder(dim, 7);
  std::mt19937_64 rng(31);
  ragmon::IndexPair indices{ragmon::ClassIndex(0, dim),
                            ragmon::ClassIndex(1, dim)};
  for (int label : {0, 1}) {
    auto& index = (label == 0) ? indices.benign : indices.attack;
    for (std::int64_t i = 0; i < 800; ++i) {
      ragmon::RetrievalRecord r;
      r.id = i;
      r.label = label;
      r.rendered_text = ragmon::render_json(sample_features(), label).text;
      r.vector = embedder.embed(r.rendered_text + std::to_string(i));
      index.add(std::move(r));
    }
  }
  ragmon::CounterDelta delta;
  delta.elapsed_s = 10.0;
  delta.rx_packets = 4932;
  delta.rx_bytes = 7084704;
  delta.tx_packets = 1;
  delta.tx_bytes = 98;
  for (auto _ : state) {
    const auto features = ragmon::compute_features(delta);
    const auto rendered =
        ragmon::render(features, ragmon::RepresentationKind::kStructuredJson);
    const auto vec = embedder.embed(rendered.text);
    auto ctx = ragmon::retrieve_context(indices, vec, rendered.text, 3);
    benchmark::DoNotOptimize(ragmon::classify_oracle(ctx));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WindowPass);

}  // namespace

BENCHMARK_MAIN();
