#pragma once

#include <optional>
#include <string>

#include "ragmon/telemetry.hpp"

namespace ragmon {

enum class RepresentationKind { kStructuredJson, kNaturalLanguage };

const char* to_string(RepresentationKind kind);
RepresentationKind representation_kind_from_string(const std::string& name);

struct RenderedSample {
  std::string text;
  RepresentationKind kind = RepresentationKind::kStructuredJson;
  std::optional<int> label;  // empty for query renderings
};

// Canonical numeric rendering for derived quantities: round half-up to four
// decimals, strip trailing fractional zeros, always keep at least one
// fractional digit (73.42530 -> "73.4253", 98 -> "98.0", 1441.3860 ->
// "1441.386"). Counts are rendered as plain integers, not through this.
// Rejects negative and non-finite input.
std::string format_quantity(double value);

// Single-line JSON rendering. Key order, spacing and brace shape are part of
// the contract; labeled samples carry "output_label" after "input_features".
RenderedSample render_json(const InterfaceFeatures& features,
                           std::optional<int> label = std::nullopt);

// Natural-language rendering; labeled samples append the label sentence.
RenderedSample render_nlr(const InterfaceFeatures& features,
                          std::optional<int> label = std::nullopt);

RenderedSample render(const InterfaceFeatures& features, RepresentationKind kind,
                      std::optional<int> label = std::nullopt);

}  // namespace ragmon
