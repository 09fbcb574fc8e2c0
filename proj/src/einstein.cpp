#include "thermjump/einstein.hpp"

#include <cmath>
#include <stdexcept>

#include "thermjump/rng.hpp"

namespace thermjump {

JumpRecord simulate_einstein(const JumpRates& rates, AtomState initial, double t_max,
                             std::uint64_t seed) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("t_max must be finite and > 0");
  }
  if (!(rates.gamma_down >= 0.0) || !(rates.gamma_up >= 0.0)) {
    throw std::invalid_argument("rates must be >= 0");
  }
  Rng rng(seed);
  JumpRecord record{initial, {}};
  AtomState state = initial;
  double t = 0.0;
  for (;;) {
    const double rate = state == AtomState::Excited ? rates.gamma_down : rates.gamma_up;
    if (rate == 0.0) break;
    const double wait = -std::log(rng.uniform_open()) / rate;
    if (t + wait > t_max) break;
    // Two draws landing on the same double would break strict ordering.
    if (t + wait == t) continue;
    t += wait;
    if (state == AtomState::Excited) {
      record.events.push_back({t, JumpKind::Down});
      state = AtomState::Ground;
    } else {
      record.events.push_back({t, JumpKind::Up});
      state = AtomState::Excited;
    }
  }
  return record;
}

}  // namespace thermjump
