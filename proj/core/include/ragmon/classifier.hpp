#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ragmon/prompt.hpp"
#include "ragmon/retrieval.hpp"

namespace ragmon {

enum class ClassifierSource { kRemote, kOracle };

struct ClassificationResult {
  int label = 0;  // 0 benign, 1 attack
  // Separation margin in oracle mode (positive leans attack); unset for
  // remote replies, which carry no usable score.
  std::optional<double> score;
  double latency_s = 0.0;
  ClassifierSource source = ClassifierSource::kOracle;
};

// Chat model client config. The auth token is read from RAGMON_LLM_API_KEY.
struct ModelConfig {
  std::string endpoint;
  std::string model;
  double temperature = 0.0;
  int max_tokens = 4;
  double timeout_s = 30.0;
  int retries = 2;  // additional attempts on transport failure
};

// Extracts the label from a model reply: the first maximal alphanumeric
// token that is exactly "0" or "1". Other tokens ("10", "label0", prose) are
// skipped, never coerced; no match raises UnparseableReplyError.
int parse_label(std::string_view reply);

// POSTs the prompt to an OpenAI-style /chat/completions endpoint.
// Transport failures are retried config.retries times, then raise
// RemoteUnavailableError; replies that do not parse raise
// UnparseableReplyError (never retried, never coerced). latency_s is the
// wall time spent in this call.
ClassificationResult classify_remote(const Prompt& prompt,
                                     const ModelConfig& config);

// Deterministic stand-in for the model: label 1 iff the mean distance to
// the benign neighbours exceeds the mean distance to the attack neighbours
// (ties resolve benign). score is that margin, reused as the ROC score.
// latency_s is fixed at 0.0 so oracle runs are byte-reproducible.
ClassificationResult classify_oracle(const RetrievedContext& context);

}  // namespace ragmon
