#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcas/state.hpp"

namespace mcas {

/// Reserved no-op action. Always allowed for every agent, never part of a
/// scenario's action list; a `pass` turn leaves the state untouched and is
/// reported as applied=false.
inline constexpr std::string_view kPassAction = "pass";

/// One precondition conjunct: the id must be bound, and when `value` is set
/// it must compare equal. An unset value is the scenario format's `*`
/// wildcard (presence test, needed by defender detection rules).
struct PropertyPattern {
  PropertyId id;
  std::optional<std::string> value;

  bool matches(const EnvState& state) const {
    const std::string* bound = state.find(id);
    if (bound == nullptr) return false;
    return !value.has_value() || *bound == *value;
  }

  bool operator==(const PropertyPattern&) const = default;
};

/// Conjunction of patterns; all must hold.
using Conjunction = std::vector<PropertyPattern>;

/// Disjunction of conjunctions. An empty outer list is one empty conjunction,
/// i.e. always satisfied (bootstrap actions need no seed property).
using PreAlternatives = std::vector<Conjunction>;

bool satisfied(const PreAlternatives& alternatives, const EnvState& state);

/// An action: pre-condition alternatives plus a postcondition property set.
/// Postcondition semantics are replace/delete: every post id is removed from
/// the state, then non-Absent entries are inserted; an Absent value is a pure
/// deletion.
struct ActionSpec {
  std::string name;
  std::vector<std::string> agents;  // agent ids allowed to play it (A_i)
  PreAlternatives pre;
  std::vector<Property> post;       // Absent values = delete-only entries
  double success_prob = 1.0;

  bool allows(std::string_view agent_id) const;

  bool operator==(const ActionSpec&) const = default;
};

/// True iff some alternative of `action.pre` holds in `state`.
/// Total function; an action with no alternatives is always applicable.
bool precondition_satisfied(const EnvState& state, const ActionSpec& action);

/// The transition s' = (s minus post ids) union non-Absent post entries.
/// Pure: `state` is copied, never mutated.
/// Throws PreconditionUnsatisfied when the action does not apply; the
/// environment is responsible for mapping that case to a no-op turn.
EnvState apply_action(const EnvState& state, const ActionSpec& action);

}  // namespace mcas
