#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mcas/action.hpp"
#include "mcas/metrics.hpp"
#include "mcas/state.hpp"

namespace mcas {

enum class Team { Attacker, Defender };

std::string_view team_name(Team team);

/// Observable-id pattern: an exact id, or `prefix.*` matching every id that
/// extends the prefix by at least one segment.
struct ObservePattern {
  PropertyId prefix;
  bool glob = false;

  /// Parses "a.b.c" or "a.b.*".
  static ObservePattern parse(std::string_view text);

  bool matches(const PropertyId& id) const {
    return glob ? id.has_prefix(prefix) : id == prefix;
  }
  std::string str() const { return glob ? prefix.str() + ".*" : prefix.str(); }

  bool operator==(const ObservePattern&) const = default;
};

/// Scripted policy: internal nodes test a predicate over the agent's
/// observation (same matcher form as preconditions, `*` wildcard included),
/// leaves name an action or `pass`. Nodes live in a pool; children are
/// indices, so the tree is acyclic by construction.
struct DecisionTree {
  struct Node {
    bool leaf = true;
    std::string action;       // leaf payload ("pass" allowed)
    PreAlternatives condition;  // internal payload
    int on_true = -1;
    int on_false = -1;

    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;  // nodes[0] is the root; empty tree = always pass

  int add_leaf(std::string action);
  int add_branch(PreAlternatives condition, int on_true, int on_false);

  bool operator==(const DecisionTree&) const = default;
};

struct RandomConfig {
  bool operator==(const RandomConfig&) const = default;
};

struct DecisionTreeConfig {
  DecisionTree tree;

  bool operator==(const DecisionTreeConfig&) const = default;
};

struct QLearningConfig {
  double alpha = 0.1;
  double gamma = 0.95;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  /// Episodes over which epsilon decays linearly within a training phase;
  /// 0 means "80% of the phase length".
  int epsilon_decay_episodes = 0;

  bool operator==(const QLearningConfig&) const = default;
};

using BehaviorConfig =
    std::variant<RandomConfig, DecisionTreeConfig, QLearningConfig>;

std::string_view behavior_type_name(const BehaviorConfig& config);

struct AgentSpec {
  std::string id;
  Team team = Team::Attacker;
  std::string home_node;
  std::vector<ObservePattern> observe;
  BehaviorConfig behavior = RandomConfig{};
  /// Action names this agent may play (A_i), derived from the actions'
  /// allowed-agent lists, in action declaration order. Not serialized.
  std::vector<std::string> action_ids;

  bool operator==(const AgentSpec&) const = default;
};

struct NodeSpec {
  std::string id;
  std::vector<Property> properties;  // initial, non-Absent

  bool operator==(const NodeSpec&) const = default;
};

/// The serializable unit the CLI loads and runs.
struct ScenarioSpec {
  std::string format_version = "1";
  std::string name;
  int max_cycles = 0;
  std::vector<NodeSpec> nodes;
  std::vector<ActionSpec> actions;
  std::vector<AgentSpec> agents;
  PreAlternatives attacker_goal;
  std::vector<std::string> metrics;
  EvalConfig eval;

  const ActionSpec* find_action(std::string_view name) const;
  const AgentSpec* find_agent(std::string_view id) const;
  std::optional<std::size_t> agent_index(std::string_view id) const;

  bool operator==(const ScenarioSpec&) const = default;
};

/// Recomputes every agent's derived action_ids from the actions' agent lists.
void derive_action_ids(ScenarioSpec& spec);

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::string location;  // JSON pointer into the scenario document

  bool operator==(const Diagnostic&) const = default;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

/// JSON -> spec. Schema-strict: unknown fields are rejected, defaults applied
/// (success_prob = 1). Throws ParseError / SchemaError. Does not validate.
ScenarioSpec parse_scenario(std::string_view document);

/// parse_scenario + validate; throws ValidationError when any Error-severity
/// diagnostic is present.
ScenarioSpec load_scenario(std::string_view document);

/// Canonical serialization: object keys sorted, arrays in declaration order,
/// UTF-8, newline-terminated. Two saves of one spec are byte-identical.
std::string save_scenario(const ScenarioSpec& spec);

/// Structural checks (uniqueness, reference integrity, behavior bounds) plus
/// a goal-satisfiability warning computed from the property closure
/// over-approximation. Never throws; returns diagnostics.
std::vector<Diagnostic> validate(const ScenarioSpec& spec);

}  // namespace mcas
