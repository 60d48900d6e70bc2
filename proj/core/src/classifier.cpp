#include "ragmon/classifier.hpp"

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

#include "ragmon/errors.hpp"

namespace ragmon {

int parse_label(std::string_view reply) {
  // First maximal alphanumeric token that is exactly "0" or "1" wins; other
  // tokens ("label0", "10", prose) are skipped, never coerced. No token
  // matching means the reply is unusable.
  std::size_t i = 0;
  while (i < reply.size()) {
    if (std::isalnum(static_cast<unsigned char>(reply[i])) == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < reply.size() &&
           std::isalnum(static_cast<unsigned char>(reply[j])) != 0)
      ++j;
    const std::string_view token = reply.substr(i, j - i);
    if (token == "0") return 0;
    if (token == "1") return 1;
    i = j;
  }
  throw UnparseableReplyError("cannot extract a 0/1 label from reply: \"" +
                              std::string(reply) + "\"");
}

namespace {

// Same endpoint convention as the embedding client.
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

}  // namespace

ClassificationResult classify_remote(const Prompt& prompt,
                                     const ModelConfig& config) {
  if (config.endpoint.empty()) {
    throw std::invalid_argument("classify_remote: endpoint is not configured");
  }
  const auto started = std::chrono::steady_clock::now();

  nlohmann::json request{
      {"model", config.model},
      {"messages",
       nlohmann::json::array(
           {nlohmann::json{{"role", "user"}, {"content", prompt.text}}})},
      {"temperature", config.temperature},
      {"max_tokens", config.max_tokens}};
  const std::string body = request.dump();

  const auto [base, prefix] = split_endpoint(config.endpoint);
  httplib::Headers headers;
  if (const char* token = std::getenv("RAGMON_LLM_API_KEY"); token && *token) {
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  std::string failure;
  for (int attempt = 0; attempt <= config.retries; ++attempt) {
    httplib::Client client(base);
    client.set_connection_timeout(static_cast<int>(config.timeout_s), 0);
    client.set_read_timeout(static_cast<int>(config.timeout_s), 0);
    auto res = client.Post(prefix + "/chat/completions", headers, body,
                           "application/json");
    if (!res) {
      failure = httplib::to_string(res.error());
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      failure = "HTTP " + std::to_string(res->status);
      continue;
    }

    std::string content;
    try {
      const auto reply = nlohmann::json::parse(res->body);
      content = reply.at("choices").at(0).at("message").at("content")
                    .get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw UnparseableReplyError(std::string("malformed completion reply: ") +
                                  e.what());
    }
    const int label = parse_label(content);  // UnparseableReplyError escapes

    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - started;
    return {label, std::nullopt, elapsed.count(), ClassifierSource::kRemote};
  }
  throw RemoteUnavailableError("model endpoint failed after " +
                               std::to_string(config.retries + 1) +
                               " attempts: " + failure);
}

ClassificationResult classify_oracle(const RetrievedContext& context) {
  if (context.benign.empty() || context.attack.empty()) {
    throw std::invalid_argument("classify_oracle: both classes need neighbours");
  }
  auto mean_distance = [](const std::vector<ScoredRecord>& side) {
    double sum = 0.0;
    for (const auto& scored : side) sum += scored.distance;
    return sum / static_cast<double>(side.size());
  };
  // Positive margin: the benign exemplars sit farther away than the attack
  // exemplars, so the window looks like an attack.
  const double margin =
      mean_distance(context.benign) - mean_distance(context.attack);
  const int label = margin > 0.0 ? 1 : 0;
  return {label, margin, 0.0, ClassifierSource::kOracle};
}

}  // namespace ragmon
