#include "mcas/observation.hpp"

#include <algorithm>
#include <cstdio>

namespace mcas {

Observation observe(const EnvState& state, const AgentSpec& agent) {
  Observation out;
  for (const auto& [id, value] : state) {
    const bool visible =
        std::any_of(agent.observe.begin(), agent.observe.end(),
                    [&](const ObservePattern& p) { return p.matches(id); });
    if (visible) out.properties.set(id, value);
  }
  return out;
}

ObservationKey encode_observation(const Observation& observation) {
  // EnvState::digest already hashes the sorted canonical (id, value) form.
  return observation.properties.digest();
}

std::string observation_key_hex(ObservationKey key) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(key));
  return std::string(buf, 16);
}

}  // namespace mcas
