#include "ragmon/mitigation.hpp"

#include <stdexcept>

namespace ragmon {

const char* to_string(MitigationActionKind kind) {
  switch (kind) {
    case MitigationActionKind::kInstallDrop:
      return "install_drop";
    case MitigationActionKind::kRemoveDrop:
      return "remove_drop";
    default:
      return "none";
  }
}

std::pair<PortMitigationState, MitigationActionKind> on_classification(
    const PortMitigationState& state, int label, double now_s) {
  if (state.phase == PortPhase::kBlocked) {
    throw std::logic_error(
        "on_classification: blocked ports are not classified");
  }
  if (label != 0 && label != 1) {
    throw std::invalid_argument("on_classification: label must be 0 or 1");
  }
  if (label == 1) {
    return {{PortPhase::kBlocked, now_s}, MitigationActionKind::kInstallDrop};
  }
  return {state, MitigationActionKind::kNone};
}

std::pair<PortMitigationState, MitigationActionKind> tick(
    const PortMitigationState& state, double now_s,
    const MitigationConfig& config) {
  if (state.phase == PortPhase::kBlocked &&
      now_s - state.blocked_since_s >= config.block_duration_s) {
    return {{PortPhase::kMonitoring, 0.0}, MitigationActionKind::kRemoveDrop};
  }
  return {state, MitigationActionKind::kNone};
}

}  // namespace ragmon
