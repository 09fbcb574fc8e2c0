#pragma once

#include <string_view>
#include <vector>

namespace thermjump {

enum class JumpKind { Up, Down };
enum class AtomState { Ground, Excited };

constexpr std::string_view to_string(JumpKind kind) {
  return kind == JumpKind::Up ? "up" : "down";
}

struct JumpEvent {
  double time = 0.0;
  JumpKind kind = JumpKind::Down;

  friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

/// Ordered record of jump times and types for one realization.
struct JumpRecord {
  AtomState initial = AtomState::Ground;
  std::vector<JumpEvent> events;

  friend bool operator==(const JumpRecord&, const JumpRecord&) = default;
};

/// True if event times are finite, non-negative and strictly increasing.
bool times_increasing(const JumpRecord& record);

/// True if kinds strictly alternate, starting with Down from Excited and Up
/// from Ground.
bool kinds_alternate(const JumpRecord& record);

/// Atom state after the last event of the record (assumes alternation).
AtomState final_state(const JumpRecord& record);

/// Total time spent Excited over [0, t_end], reconstructed from the record.
double excited_time(const JumpRecord& record, double t_end);

/// Completed residence intervals, split by the state they were spent in.
/// The interval from t = 0 to the first jump counts (memoryless waiting); the
/// interval still open at t_end is censored and dropped.
struct ResidenceTimes {
  std::vector<double> excited;
  std::vector<double> ground;
};
ResidenceTimes residence_times(const JumpRecord& record);

}  // namespace thermjump
