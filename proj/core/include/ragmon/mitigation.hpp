#pragma once

#include <string>
#include <utility>

namespace ragmon {

struct MitigationConfig {
  double block_duration_s = 40.0;
};

enum class PortPhase { kMonitoring, kBlocked };

struct PortMitigationState {
  PortPhase phase = PortPhase::kMonitoring;
  double blocked_since_s = 0.0;  // meaningful only while kBlocked
};

enum class MitigationActionKind { kNone, kInstallDrop, kRemoveDrop };

const char* to_string(MitigationActionKind kind);

// Classification outcome for a Monitoring port. label 1 blocks the port
// (InstallDrop) and stamps blocked_since_s = now_s; label 0 is a no-op.
// Calling this for a Blocked port is a contract violation (ports under a
// drop rule are not classified) and throws std::logic_error.
std::pair<PortMitigationState, MitigationActionKind> on_classification(
    const PortMitigationState& state, int label, double now_s);

// Recovery timer. A Blocked port whose block has aged at least
// block_duration_s (inclusive: now_s - blocked_since_s >= duration) returns
// to Monitoring with RemoveDrop. Monitoring ports pass through unchanged.
std::pair<PortMitigationState, MitigationActionKind> tick(
    const PortMitigationState& state, double now_s,
    const MitigationConfig& config);

}  // namespace ragmon
