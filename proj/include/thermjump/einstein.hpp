#pragma once

#include <cstdint>

#include "thermjump/physics.hpp"
#include "thermjump/record.hpp"

namespace thermjump {

/// Einstein jump process: exponential residences with rate Gamma_down in the
/// excited state and Gamma_up in the ground state. Ground with Gamma_up == 0
/// is absorbing and simply ends the record.
JumpRecord simulate_einstein(const JumpRates& rates, AtomState initial, double t_max,
                             std::uint64_t seed);

inline JumpRecord simulate_einstein(const PhysicalParams& params, AtomState initial,
                                    double t_max, std::uint64_t seed) {
  return simulate_einstein(params.rates(), initial, t_max, seed);
}

}  // namespace thermjump
