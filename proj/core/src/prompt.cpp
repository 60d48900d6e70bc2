#include "ragmon/prompt.hpp"

#include <stdexcept>

namespace ragmon {

namespace {

constexpr std::size_t kExamplesPerClass = 3;

bool looks_like_json(const std::string& text) {
  return !text.empty() && text.front() == '{';
}

bool carries_label(const std::string& text, RepresentationKind kind) {
  if (kind == RepresentationKind::kStructuredJson) {
    return text.find("\"output_label\":") != std::string::npos;
  }
  return text.find("The interface label is") != std::string::npos;
}

void check_example(const ScoredRecord& scored, RepresentationKind kind,
                   int expected_label) {
  if (!scored.record) {
    throw std::invalid_argument("build_prompt: context holds a null record");
  }
  const auto& text = scored.record->rendered_text;
  if (looks_like_json(text) != (kind == RepresentationKind::kStructuredJson)) {
    throw std::invalid_argument(
        "build_prompt: example representation does not match the requested kind");
  }
  if (!carries_label(text, kind)) {
    throw std::invalid_argument("build_prompt: example text is unlabeled");
  }
  if (scored.record->label != expected_label) {
    throw std::invalid_argument("build_prompt: example is in the wrong class");
  }
}

}  // namespace

Prompt build_prompt(const RetrievedContext& context, RepresentationKind kind) {
  if (context.benign.size() != kExamplesPerClass ||
      context.attack.size() != kExamplesPerClass) {
    throw std::invalid_argument(
        "build_prompt: need exactly " + std::to_string(kExamplesPerClass) +
        " neighbours per class, got " + std::to_string(context.benign.size()) +
        " benign and " + std::to_string(context.attack.size()) + " attack");
  }
  if (context.query_text.empty()) {
    throw std::invalid_argument("build_prompt: empty query text");
  }
  if (looks_like_json(context.query_text) !=
      (kind == RepresentationKind::kStructuredJson)) {
    throw std::invalid_argument(
        "build_prompt: query representation does not match the requested kind");
  }
  if (carries_label(context.query_text, kind)) {
    throw std::invalid_argument("build_prompt: query text must be unlabeled");
  }
  for (const auto& scored : context.benign) check_example(scored, kind, 0);
  for (const auto& scored : context.attack) check_example(scored, kind, 1);

  std::string text(kPromptTaskHeader);
  text += "\n\nLabeled interface status:";
  for (const auto* side : {&context.benign, &context.attack}) {
    for (const auto& scored : *side) {
      text += "\n\n";
      text += scored.record->rendered_text;
    }
  }
  text += "\n\nTarget interface status:\n\n";
  text += context.query_text;
  text += "\n\n";
  text += kPromptInstruction;

  return {std::move(text), kind, 2 * kExamplesPerClass};
}

}  // namespace ragmon
