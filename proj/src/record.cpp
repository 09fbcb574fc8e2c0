#include "thermjump/record.hpp"

#include <cmath>

namespace thermjump {

bool times_increasing(const JumpRecord& record) {
  double prev = -1.0;
  for (const auto& e : record.events) {
    if (!std::isfinite(e.time) || e.time < 0.0 || e.time <= prev) return false;
    prev = e.time;
  }
  return true;
}

bool kinds_alternate(const JumpRecord& record) {
  JumpKind expected = record.initial == AtomState::Excited ? JumpKind::Down : JumpKind::Up;
  for (const auto& e : record.events) {
    if (e.kind != expected) return false;
    expected = expected == JumpKind::Up ? JumpKind::Down : JumpKind::Up;
  }
  return true;
}

AtomState final_state(const JumpRecord& record) {
  if (record.events.empty()) return record.initial;
  return record.events.back().kind == JumpKind::Up ? AtomState::Excited : AtomState::Ground;
}

double excited_time(const JumpRecord& record, double t_end) {
  double total = 0.0;
  double t_prev = 0.0;
  bool excited = record.initial == AtomState::Excited;
  for (const auto& e : record.events) {
    if (e.time > t_end) break;
    if (excited) total += e.time - t_prev;
    excited = e.kind == JumpKind::Up;
    t_prev = e.time;
  }
  if (excited && t_end > t_prev) total += t_end - t_prev;
  return total;
}

ResidenceTimes residence_times(const JumpRecord& record) {
  ResidenceTimes out;
  double t_prev = 0.0;
  bool excited = record.initial == AtomState::Excited;
  for (const auto& e : record.events) {
    (excited ? out.excited : out.ground).push_back(e.time - t_prev);
    excited = e.kind == JumpKind::Up;
    t_prev = e.time;
  }
  return out;
}

}  // namespace thermjump
