#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ragmon/representation.hpp"
#include "ragmon/retrieval.hpp"

namespace ragmon {

inline constexpr std::string_view kPromptTaskHeader =
    "Task: Detect whether the interface status observed during the last ten "
    "seconds indicates an attack or normal behavior. Analyze the provided "
    "examples labeled interface status, then classify the target interface "
    "status accordingly.";

inline constexpr std::string_view kPromptInstruction =
    "Instructions: Only answer with one number, the label of the target "
    "interface status: 0 for Benign, 1 for Attack. Do not explain.";

struct Prompt {
  std::string text;
  RepresentationKind kind = RepresentationKind::kStructuredJson;
  std::size_t example_count = 0;
};

// Assembles: task header, "Labeled interface status:" section with the three
// benign then the three attack examples, "Target interface status:" section
// with the query, then the instruction line. Blocks are separated by one
// blank line; no trailing newline.
//
// Validates its inputs instead of trusting the caller: exactly three
// neighbours per class, every example text labeled and of the requested
// kind, query text unlabeled. Violations throw std::invalid_argument.
Prompt build_prompt(const RetrievedContext& context, RepresentationKind kind);

}  // namespace ragmon
