#include "mcas/action.hpp"

#include <algorithm>

#include "mcas/errors.hpp"

namespace mcas {

bool satisfied(const PreAlternatives& alternatives, const EnvState& state) {
  if (alternatives.empty()) return true;
  return std::any_of(alternatives.begin(), alternatives.end(),
                     [&](const Conjunction& conj) {
                       return std::all_of(conj.begin(), conj.end(),
                                          [&](const PropertyPattern& p) {
                                            return p.matches(state);
                                          });
                     });
}

bool ActionSpec::allows(std::string_view agent_id) const {
  return std::find(agents.begin(), agents.end(), agent_id) != agents.end();
}

bool precondition_satisfied(const EnvState& state, const ActionSpec& action) {
  return satisfied(action.pre, state);
}

EnvState apply_action(const EnvState& state, const ActionSpec& action) {
  if (!precondition_satisfied(state, action)) {
    throw PreconditionUnsatisfied("action '" + action.name +
                                  "' is not applicable in this state");
  }
  EnvState next = state;
  // Remove every id named by the postcondition, then insert the entries that
  // carry a value. Absent-valued entries therefore delete without inserting.
  for (const Property& p : action.post) next.erase(p.id);
  for (const Property& p : action.post) {
    if (!p.value.is_absent()) next.set(p.id, p.value.str());
  }
  return next;
}

}  // namespace mcas
