#pragma once

#include <cstdint>
#include <vector>

#include "streid/simulator.h"

namespace streid::testing {

// Six cameras with two states each. Rows differ by state and leave some
// destinations unreachable, so zero cells are exercised too.
inline ScenarioConfig recovery_config(std::size_t identities, double hops,
                                      std::uint64_t seed) {
  ScenarioConfig c;
  c.state_counts.assign(6, 2);
  c.transition.assign(6, std::vector<std::vector<double>>(2, std::vector<double>(6, 0.0)));
  for (std::uint32_t i = 0; i < 6; ++i) {
    auto& s0 = c.transition[i][0];
    s0[(i + 1) % 6] = 0.5;
    s0[(i + 2) % 6] = 0.3;
    s0[i] = 0.2;
    auto& s1 = c.transition[i][1];
    s1[(i + 5) % 6] = 0.6;
    s1[(i + 3) % 6] = 0.25;
    s1[(i + 4) % 6] = 0.15;
  }
  c.default_travel = {{300.0, 40.0, 1.0}};
  c.num_identities = identities;
  c.mean_hops = hops;
  c.start_time_span = 1e5;
  c.train_fraction = 1.0;
  c.seed = seed;
  return c;
}

}  // namespace streid::testing
