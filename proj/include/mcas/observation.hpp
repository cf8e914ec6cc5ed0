#pragma once

#include <cstdint>
#include <string>

#include "mcas/scenario.hpp"
#include "mcas/state.hpp"

namespace mcas {

/// The property subset one agent sees. Backed by an EnvState so matching and
/// canonical ordering are shared with states; always a subset of the state it
/// was filtered from.
struct Observation {
  EnvState properties;

  bool operator==(const Observation&) const = default;
};

/// Exactly the state entries matching any of the agent's observable patterns.
Observation observe(const EnvState& state, const AgentSpec& agent);

/// Discretization key for tabular learning: FNV-1a over the canonical sorted
/// (id, value) serialization. Permuting property order cannot change the key;
/// the empty observation hashes to the FNV offset basis 0xcbf29ce484222325.
using ObservationKey = std::uint64_t;

ObservationKey encode_observation(const Observation& observation);

/// Fixed-width lowercase hex form used by the QTable JSON export.
std::string observation_key_hex(ObservationKey key);

}  // namespace mcas
