#include "mcas/scenario.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "json.hpp"
#include "mcas/errors.hpp"

namespace mcas {

using nlohmann::json;

std::string_view team_name(Team team) {
  return team == Team::Attacker ? "attacker" : "defender";
}

ObservePattern ObservePattern::parse(std::string_view text) {
  ObservePattern p;
  if (text.size() > 2 && text.substr(text.size() - 2) == ".*") {
    p.glob = true;
    text.remove_suffix(2);
  }
  auto id = PropertyId::try_parse(text);
  if (!id) {
    throw std::invalid_argument("invalid observe pattern '" +
                                std::string(text) + "'");
  }
  p.prefix = std::move(*id);
  return p;
}

int DecisionTree::add_leaf(std::string action) {
  Node node;
  node.leaf = true;
  node.action = std::move(action);
  nodes.push_back(std::move(node));
  return static_cast<int>(nodes.size()) - 1;
}

int DecisionTree::add_branch(PreAlternatives condition, int on_true,
                             int on_false) {
  Node node;
  node.leaf = false;
  node.condition = std::move(condition);
  node.on_true = on_true;
  node.on_false = on_false;
  nodes.push_back(std::move(node));
  return static_cast<int>(nodes.size()) - 1;
}

std::string_view behavior_type_name(const BehaviorConfig& config) {
  if (std::holds_alternative<RandomConfig>(config)) return "random";
  if (std::holds_alternative<DecisionTreeConfig>(config)) return "decision_tree";
  return "qlearning";
}

const ActionSpec* ScenarioSpec::find_action(std::string_view name) const {
  for (const ActionSpec& a : actions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

const AgentSpec* ScenarioSpec::find_agent(std::string_view id) const {
  for (const AgentSpec& a : agents) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

std::optional<std::size_t> ScenarioSpec::agent_index(std::string_view id) const {
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (agents[i].id == id) return i;
  }
  return std::nullopt;
}

void derive_action_ids(ScenarioSpec& spec) {
  for (AgentSpec& agent : spec.agents) {
    agent.action_ids.clear();
    for (const ActionSpec& action : spec.actions) {
      if (action.allows(agent.id)) agent.action_ids.push_back(action.name);
    }
  }
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) {
                       return d.severity == Severity::Error;
                     });
}

// ---------------------------------------------------------------------------
// parsing

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return key == k;
        }) == allowed.end()) {
      schema_fail(where, "unknown field '" + key + "'");
    }
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) schema_fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) schema_fail(where, "expected a string");
  return j.get<std::string>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) schema_fail(where, "expected an integer");
  return j.get<int>();
}

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) schema_fail(where, "expected a number");
  return j.get<double>();
}

const json& as_array(const json& j, const std::string& where) {
  if (!j.is_array()) schema_fail(where, "expected an array");
  return j;
}

const json& as_object(const json& j, const std::string& where) {
  if (!j.is_object()) schema_fail(where, "expected an object");
  return j;
}

PropertyId parse_id(const json& j, const std::string& where) {
  auto id = PropertyId::try_parse(as_string(j, where));
  if (!id) schema_fail(where, "invalid property id");
  return std::move(*id);
}

// {"id": str, "value": str | "*"}  -- outer array OR, inner array AND
PreAlternatives parse_alternatives(const json& j, const std::string& where) {
  PreAlternatives alternatives;
  as_array(j, where);
  for (std::size_t a = 0; a < j.size(); ++a) {
    const std::string alt_where = where + "/" + std::to_string(a);
    const json& alt = as_array(j[a], alt_where);
    Conjunction conj;
    for (std::size_t m = 0; m < alt.size(); ++m) {
      const std::string m_where = alt_where + "/" + std::to_string(m);
      const json& matcher = as_object(alt[m], m_where);
      check_keys(matcher, m_where, {"id", "value"});
      PropertyPattern pattern;
      pattern.id = parse_id(require(matcher, "id", m_where), m_where + "/id");
      const std::string value =
          as_string(require(matcher, "value", m_where), m_where + "/value");
      if (value != "*") pattern.value = value;
      conj.push_back(std::move(pattern));
    }
    alternatives.push_back(std::move(conj));
  }
  return alternatives;
}

int parse_dt_node(DecisionTree& tree, const json& j, const std::string& where) {
  const json& node = as_object(j, where);
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (node.contains("action")) {
    check_keys(node, where, {"action"});
    DecisionTree::Node leaf;
    leaf.leaf = true;
    leaf.action = as_string(node["action"], where + "/action");
    tree.nodes[static_cast<std::size_t>(index)] = std::move(leaf);
    return index;
  }
  check_keys(node, where, {"if", "then", "else"});
  DecisionTree::Node branch;
  branch.leaf = false;
  branch.condition =
      parse_alternatives(require(node, "if", where), where + "/if");
  const int on_true =
      parse_dt_node(tree, require(node, "then", where), where + "/then");
  const int on_false =
      parse_dt_node(tree, require(node, "else", where), where + "/else");
  branch.on_true = on_true;
  branch.on_false = on_false;
  tree.nodes[static_cast<std::size_t>(index)] = std::move(branch);
  return index;
}

BehaviorConfig parse_behavior(const json& j, const std::string& where) {
  const json& behavior = as_object(j, where);
  const std::string type =
      as_string(require(behavior, "type", where), where + "/type");
  if (type == "random") {
    check_keys(behavior, where, {"type"});
    return RandomConfig{};
  }
  if (type == "decision_tree") {
    check_keys(behavior, where, {"type", "tree"});
    DecisionTreeConfig config;
    parse_dt_node(config.tree, require(behavior, "tree", where),
                  where + "/tree");
    return config;
  }
  if (type == "qlearning") {
    check_keys(behavior, where,
               {"type", "alpha", "gamma", "epsilon_start", "epsilon_end",
                "epsilon_decay_episodes"});
    QLearningConfig config;
    if (behavior.contains("alpha")) {
      config.alpha = as_double(behavior["alpha"], where + "/alpha");
    }
    if (behavior.contains("gamma")) {
      config.gamma = as_double(behavior["gamma"], where + "/gamma");
    }
    if (behavior.contains("epsilon_start")) {
      config.epsilon_start =
          as_double(behavior["epsilon_start"], where + "/epsilon_start");
    }
    if (behavior.contains("epsilon_end")) {
      config.epsilon_end =
          as_double(behavior["epsilon_end"], where + "/epsilon_end");
    }
    if (behavior.contains("epsilon_decay_episodes")) {
      config.epsilon_decay_episodes =
          as_int(behavior["epsilon_decay_episodes"],
                 where + "/epsilon_decay_episodes");
    }
    return config;
  }
  schema_fail(where + "/type", "unknown behavior type '" + type + "'");
}

}  // namespace

ScenarioSpec parse_scenario(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw SchemaError("top level: expected an object");
  check_keys(doc, "top level",
             {"format_version", "name", "max_cycles", "nodes", "actions",
              "agents", "attacker_goal", "metrics", "eval"});

  ScenarioSpec spec;
  spec.format_version =
      as_string(require(doc, "format_version", "top level"), "/format_version");
  if (spec.format_version != "1") {
    schema_fail("/format_version", "unsupported version '" +
                                       spec.format_version + "'");
  }
  spec.name = as_string(require(doc, "name", "top level"), "/name");
  spec.max_cycles = as_int(require(doc, "max_cycles", "top level"), "/max_cycles");
  if (spec.max_cycles < 0) schema_fail("/max_cycles", "must be >= 0");

  const json& nodes = as_array(require(doc, "nodes", "top level"), "/nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string where = "/nodes/" + std::to_string(i);
    const json& jnode = as_object(nodes[i], where);
    check_keys(jnode, where, {"id", "properties"});
    NodeSpec node;
    node.id = as_string(require(jnode, "id", where), where + "/id");
    const json& props =
        as_array(require(jnode, "properties", where), where + "/properties");
    for (std::size_t p = 0; p < props.size(); ++p) {
      const std::string p_where = where + "/properties/" + std::to_string(p);
      const json& jprop = as_object(props[p], p_where);
      check_keys(jprop, p_where, {"id", "value"});
      Property prop;
      prop.id = parse_id(require(jprop, "id", p_where), p_where + "/id");
      prop.value = PropertyValue::text(
          as_string(require(jprop, "value", p_where), p_where + "/value"));
      node.properties.push_back(std::move(prop));
    }
    spec.nodes.push_back(std::move(node));
  }

  const json& actions = as_array(require(doc, "actions", "top level"), "/actions");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string where = "/actions/" + std::to_string(i);
    const json& jaction = as_object(actions[i], where);
    check_keys(jaction, where, {"name", "agents", "pre", "post", "success_prob"});
    ActionSpec action;
    action.name = as_string(require(jaction, "name", where), where + "/name");
    const json& allowed =
        as_array(require(jaction, "agents", where), where + "/agents");
    for (std::size_t a = 0; a < allowed.size(); ++a) {
      action.agents.push_back(
          as_string(allowed[a], where + "/agents/" + std::to_string(a)));
    }
    action.pre = parse_alternatives(require(jaction, "pre", where), where + "/pre");
    const json& post = as_array(require(jaction, "post", where), where + "/post");
    for (std::size_t p = 0; p < post.size(); ++p) {
      const std::string p_where = where + "/post/" + std::to_string(p);
      const json& entry = as_object(post[p], p_where);
      check_keys(entry, p_where, {"id", "value"});
      Property prop;
      prop.id = parse_id(require(entry, "id", p_where), p_where + "/id");
      const json& value = require(entry, "value", p_where);
      prop.value = value.is_null()
                       ? PropertyValue::absent()
                       : PropertyValue::text(as_string(value, p_where + "/value"));
      action.post.push_back(std::move(prop));
    }
    if (jaction.contains("success_prob")) {
      action.success_prob =
          as_double(jaction["success_prob"], where + "/success_prob");
    }
    spec.actions.push_back(std::move(action));
  }

  const json& agents = as_array(require(doc, "agents", "top level"), "/agents");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string where = "/agents/" + std::to_string(i);
    const json& jagent = as_object(agents[i], where);
    check_keys(jagent, where, {"id", "team", "node", "observe", "behavior"});
    AgentSpec agent;
    agent.id = as_string(require(jagent, "id", where), where + "/id");
    const std::string team =
        as_string(require(jagent, "team", where), where + "/team");
    if (team == "attacker") {
      agent.team = Team::Attacker;
    } else if (team == "defender") {
      agent.team = Team::Defender;
    } else {
      schema_fail(where + "/team", "expected 'attacker' or 'defender'");
    }
    agent.home_node = as_string(require(jagent, "node", where), where + "/node");
    const json& observe =
        as_array(require(jagent, "observe", where), where + "/observe");
    for (std::size_t o = 0; o < observe.size(); ++o) {
      const std::string o_where = where + "/observe/" + std::to_string(o);
      try {
        agent.observe.push_back(
            ObservePattern::parse(as_string(observe[o], o_where)));
      } catch (const std::invalid_argument& e) {
        schema_fail(o_where, e.what());
      }
    }
    agent.behavior =
        parse_behavior(require(jagent, "behavior", where), where + "/behavior");
    spec.agents.push_back(std::move(agent));
  }

  spec.attacker_goal = parse_alternatives(
      require(doc, "attacker_goal", "top level"), "/attacker_goal");

  const json& metrics = as_array(require(doc, "metrics", "top level"), "/metrics");
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    spec.metrics.push_back(
        as_string(metrics[i], "/metrics/" + std::to_string(i)));
  }

  const json& eval = as_object(require(doc, "eval", "top level"), "/eval");
  check_keys(eval, "/eval", {"weights", "bias"});
  const json& weights = as_array(require(eval, "weights", "/eval"), "/eval/weights");
  if (weights.size() != 2) {
    schema_fail("/eval/weights", "expected 2 rows (attacker, defender)");
  }
  for (std::size_t r = 0; r < 2; ++r) {
    const std::string r_where = "/eval/weights/" + std::to_string(r);
    const json& row = as_array(weights[r], r_where);
    for (std::size_t c = 0; c < row.size(); ++c) {
      spec.eval.weights[r].push_back(
          as_double(row[c], r_where + "/" + std::to_string(c)));
    }
  }
  const json& bias = as_array(require(eval, "bias", "/eval"), "/eval/bias");
  if (bias.size() != 2) schema_fail("/eval/bias", "expected 2 entries");
  spec.eval.bias[0] = as_double(bias[0], "/eval/bias/0");
  spec.eval.bias[1] = as_double(bias[1], "/eval/bias/1");

  derive_action_ids(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// saving

namespace {

json alternatives_to_json(const PreAlternatives& alternatives) {
  json out = json::array();
  for (const Conjunction& conj : alternatives) {
    json jconj = json::array();
    for (const PropertyPattern& pattern : conj) {
      jconj.push_back(json{{"id", pattern.id.str()},
                           {"value", pattern.value ? json(*pattern.value)
                                                   : json("*")}});
    }
    out.push_back(std::move(jconj));
  }
  return out;
}

json dt_node_to_json(const DecisionTree& tree, int index) {
  const auto& node = tree.nodes.at(static_cast<std::size_t>(index));
  if (node.leaf) return json{{"action", node.action}};
  return json{{"if", alternatives_to_json(node.condition)},
              {"then", dt_node_to_json(tree, node.on_true)},
              {"else", dt_node_to_json(tree, node.on_false)}};
}

json behavior_to_json(const BehaviorConfig& config) {
  json out;
  out["type"] = std::string(behavior_type_name(config));
  if (const auto* dt = std::get_if<DecisionTreeConfig>(&config)) {
    out["tree"] = dt->tree.nodes.empty() ? json{{"action", "pass"}}
                                         : dt_node_to_json(dt->tree, 0);
  } else if (const auto* q = std::get_if<QLearningConfig>(&config)) {
    out["alpha"] = q->alpha;
    out["gamma"] = q->gamma;
    out["epsilon_start"] = q->epsilon_start;
    out["epsilon_end"] = q->epsilon_end;
    out["epsilon_decay_episodes"] = q->epsilon_decay_episodes;
  }
  return out;
}

}  // namespace

std::string save_scenario(const ScenarioSpec& spec) {
  json doc;
  doc["format_version"] = spec.format_version;
  doc["name"] = spec.name;
  doc["max_cycles"] = spec.max_cycles;

  json nodes = json::array();
  for (const NodeSpec& node : spec.nodes) {
    json props = json::array();
    for (const Property& p : node.properties) {
      props.push_back(json{{"id", p.id.str()}, {"value", p.value.str()}});
    }
    nodes.push_back(json{{"id", node.id}, {"properties", std::move(props)}});
  }
  doc["nodes"] = std::move(nodes);

  json actions = json::array();
  for (const ActionSpec& action : spec.actions) {
    json post = json::array();
    for (const Property& p : action.post) {
      post.push_back(json{{"id", p.id.str()},
                          {"value", p.value.is_absent() ? json(nullptr)
                                                        : json(p.value.str())}});
    }
    actions.push_back(json{{"name", action.name},
                           {"agents", action.agents},
                           {"pre", alternatives_to_json(action.pre)},
                           {"post", std::move(post)},
                           {"success_prob", action.success_prob}});
  }
  doc["actions"] = std::move(actions);

  json agents = json::array();
  for (const AgentSpec& agent : spec.agents) {
    json observe = json::array();
    for (const ObservePattern& p : agent.observe) observe.push_back(p.str());
    agents.push_back(json{{"id", agent.id},
                          {"team", std::string(team_name(agent.team))},
                          {"node", agent.home_node},
                          {"observe", std::move(observe)},
                          {"behavior", behavior_to_json(agent.behavior)}});
  }
  doc["agents"] = std::move(agents);

  doc["attacker_goal"] = alternatives_to_json(spec.attacker_goal);
  doc["metrics"] = spec.metrics;
  doc["eval"] = json{{"weights", json::array({spec.eval.weights[0],
                                              spec.eval.weights[1]})},
                     {"bias", json::array({spec.eval.bias[0], spec.eval.bias[1]})}};

  return doc.dump(2) + "\n";
}

ScenarioSpec load_scenario(std::string_view document) {
  ScenarioSpec spec = parse_scenario(document);
  const auto diagnostics = validate(spec);
  if (has_errors(diagnostics)) {
    std::string detail;
    for (const Diagnostic& d : diagnostics) {
      if (d.severity == Severity::Error) {
        detail += detail.empty() ? "" : "; ";
        detail += d.code + " at " + d.location;
      }
    }
    throw ValidationError(detail);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// validation

namespace {

/// Over-approximate value sets: id -> every value any action could ever bind.
/// Deletions are ignored, so anything reachable in a real run is contained.
class PropertyClosure {
 public:
  explicit PropertyClosure(const ScenarioSpec& spec) {
    for (const NodeSpec& node : spec.nodes) {
      for (const Property& p : node.properties) {
        values_[p.id].insert(p.value.str());
      }
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (const ActionSpec& action : spec.actions) {
        if (!pre_satisfiable(action.pre)) continue;
        for (const Property& p : action.post) {
          if (p.value.is_absent()) continue;
          if (values_[p.id].insert(p.value.str()).second) changed = true;
        }
      }
    }
  }

  bool pattern_satisfiable(const PropertyPattern& pattern) const {
    const auto it = values_.find(pattern.id);
    if (it == values_.end()) return false;
    return !pattern.value || it->second.count(*pattern.value) > 0;
  }

  bool pre_satisfiable(const PreAlternatives& alternatives) const {
    if (alternatives.empty()) return true;
    return std::any_of(
        alternatives.begin(), alternatives.end(), [&](const Conjunction& conj) {
          return std::all_of(conj.begin(), conj.end(),
                             [&](const PropertyPattern& p) {
                               return pattern_satisfiable(p);
                             });
        });
  }

 private:
  std::map<PropertyId, std::set<std::string>> values_;
};

class Validator {
 public:
  explicit Validator(const ScenarioSpec& spec) : spec_(spec) {
    for (const NodeSpec& node : spec.nodes) node_ids_.insert(node.id);
    for (const AgentSpec& agent : spec.agents) agent_ids_.insert(agent.id);
  }

  std::vector<Diagnostic> run() {
    check_counts();
    check_uniqueness();
    check_nodes();
    check_actions();
    check_agents();
    check_goal();
    check_metrics_eval();
    check_reachability();
    return std::move(diagnostics_);
  }

 private:
  void error(std::string code, std::string message, std::string location) {
    diagnostics_.push_back(Diagnostic{Severity::Error, std::move(code),
                                      std::move(message), std::move(location)});
  }
  void warning(std::string code, std::string message, std::string location) {
    diagnostics_.push_back(Diagnostic{Severity::Warning, std::move(code),
                                      std::move(message), std::move(location)});
  }

  /// A referenced id must live under a declared node or under
  /// `agents.<agent id>` (agent knowledge).
  void check_id_reference(const PropertyId& id, const std::string& location) {
    const std::string head(id.head());
    if (head == "agents") {
      const std::string owner(id.segment(1));
      if (agent_ids_.count(owner) == 0) {
        error("dangling-agent-knowledge",
              "id '" + id.str() + "' names unknown agent '" + owner + "'",
              location);
      }
      return;
    }
    if (node_ids_.count(head) == 0) {
      error("dangling-node-ref",
            "id '" + id.str() + "' names unknown node '" + head + "'",
            location);
    }
  }

  void check_alternatives(const PreAlternatives& alternatives,
                          const std::string& location) {
    for (std::size_t a = 0; a < alternatives.size(); ++a) {
      for (std::size_t m = 0; m < alternatives[a].size(); ++m) {
        check_id_reference(alternatives[a][m].id,
                           location + "/" + std::to_string(a) + "/" +
                               std::to_string(m) + "/id");
      }
    }
  }

  void check_counts() {
    if (spec_.nodes.empty()) {
      error("no-nodes", "scenario declares no nodes", "/nodes");
    }
    if (spec_.agents.empty()) {
      error("no-agents", "scenario declares no agents", "/agents");
    }
  }

  void check_uniqueness() {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < spec_.nodes.size(); ++i) {
      if (!seen.insert(spec_.nodes[i].id).second) {
        error("duplicate-node", "node '" + spec_.nodes[i].id + "' redeclared",
              "/nodes/" + std::to_string(i) + "/id");
      }
    }
    seen.clear();
    for (std::size_t i = 0; i < spec_.actions.size(); ++i) {
      if (!seen.insert(spec_.actions[i].name).second) {
        error("duplicate-action",
              "action '" + spec_.actions[i].name + "' redeclared",
              "/actions/" + std::to_string(i) + "/name");
      }
    }
    seen.clear();
    for (std::size_t i = 0; i < spec_.agents.size(); ++i) {
      if (!seen.insert(spec_.agents[i].id).second) {
        error("duplicate-agent", "agent '" + spec_.agents[i].id + "' redeclared",
              "/agents/" + std::to_string(i) + "/id");
      }
    }
  }

  void check_nodes() {
    for (std::size_t i = 0; i < spec_.nodes.size(); ++i) {
      const NodeSpec& node = spec_.nodes[i];
      for (std::size_t p = 0; p < node.properties.size(); ++p) {
        const std::string where = "/nodes/" + std::to_string(i) +
                                  "/properties/" + std::to_string(p) + "/id";
        if (node.properties[p].id.head() != node.id) {
          error("foreign-property",
                "property '" + node.properties[p].id.str() +
                    "' does not belong to node '" + node.id + "'",
                where);
        }
        if (node.properties[p].value.is_absent()) {
          error("absent-initial-value",
                "initial properties cannot be Absent", where);
        }
      }
    }
  }

  void check_actions() {
    for (std::size_t i = 0; i < spec_.actions.size(); ++i) {
      const ActionSpec& action = spec_.actions[i];
      const std::string where = "/actions/" + std::to_string(i);
      if (action.name == kPassAction) {
        error("reserved-action-name",
              "'pass' is the built-in no-op action name", where + "/name");
      }
      for (std::size_t a = 0; a < action.agents.size(); ++a) {
        if (agent_ids_.count(action.agents[a]) == 0) {
          error("dangling-agent-ref",
                "action '" + action.name + "' allows unknown agent '" +
                    action.agents[a] + "'",
                where + "/agents/" + std::to_string(a));
        }
      }
      check_alternatives(action.pre, where + "/pre");
      std::set<PropertyId> post_ids;
      for (std::size_t p = 0; p < action.post.size(); ++p) {
        const std::string p_where = where + "/post/" + std::to_string(p);
        check_id_reference(action.post[p].id, p_where + "/id");
        if (!post_ids.insert(action.post[p].id).second) {
          error("duplicate-post-id",
                "post lists id '" + action.post[p].id.str() + "' twice",
                p_where + "/id");
        }
      }
      if (action.success_prob < 0.0 || action.success_prob > 1.0) {
        error("bad-success-prob", "success_prob must lie in [0, 1]",
              where + "/success_prob");
      }
    }
  }

  void check_dt(const DecisionTree& tree, const AgentSpec& agent,
                const std::string& where) {
    for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
      const auto& node = tree.nodes[n];
      const std::string n_where = where + " (node " + std::to_string(n) + ")";
      if (node.leaf) {
        if (node.action != kPassAction &&
            std::find(agent.action_ids.begin(), agent.action_ids.end(),
                      node.action) == agent.action_ids.end()) {
          error("dt-unknown-action",
                "decision tree leaf names action '" + node.action +
                    "' not allowed for agent '" + agent.id + "'",
                n_where);
        }
      } else {
        for (const Conjunction& conj : node.condition) {
          for (const PropertyPattern& p : conj) {
            check_id_reference(p.id, n_where);
          }
        }
        const int size = static_cast<int>(tree.nodes.size());
        if (node.on_true < 0 || node.on_true >= size || node.on_false < 0 ||
            node.on_false >= size) {
          error("dt-bad-link", "decision tree child index out of range",
                n_where);
        }
      }
    }
  }

  void check_agents() {
    for (std::size_t i = 0; i < spec_.agents.size(); ++i) {
      const AgentSpec& agent = spec_.agents[i];
      const std::string where = "/agents/" + std::to_string(i);
      if (node_ids_.count(agent.home_node) == 0) {
        error("unknown-home-node",
              "agent '" + agent.id + "' deployed on unknown node '" +
                  agent.home_node + "'",
              where + "/node");
      }
      for (std::size_t o = 0; o < agent.observe.size(); ++o) {
        check_id_reference(agent.observe[o].prefix,
                           where + "/observe/" + std::to_string(o));
      }
      if (const auto* dt = std::get_if<DecisionTreeConfig>(&agent.behavior)) {
        check_dt(dt->tree, agent, where + "/behavior/tree");
      } else if (const auto* q = std::get_if<QLearningConfig>(&agent.behavior)) {
        const std::string q_where = where + "/behavior";
        if (!(q->alpha > 0.0 && q->alpha <= 1.0)) {
          error("bad-hyperparameter", "alpha must lie in (0, 1]", q_where);
        }
        if (!(q->gamma >= 0.0 && q->gamma < 1.0)) {
          error("bad-hyperparameter", "gamma must lie in [0, 1)", q_where);
        }
        if (q->epsilon_start < 0.0 || q->epsilon_start > 1.0 ||
            q->epsilon_end < 0.0 || q->epsilon_end > 1.0 ||
            q->epsilon_end > q->epsilon_start) {
          error("bad-hyperparameter",
                "epsilons must lie in [0, 1] with epsilon_end <= epsilon_start",
                q_where);
        }
        if (q->epsilon_decay_episodes < 0) {
          error("bad-hyperparameter", "epsilon_decay_episodes must be >= 0",
                q_where);
        }
      }
      const bool needs_actions =
          !std::holds_alternative<DecisionTreeConfig>(agent.behavior);
      if (needs_actions && agent.action_ids.empty()) {
        error("no-agent-actions",
              "agent '" + agent.id + "' has no playable actions", where);
      }
    }
  }

  void check_goal() {
    check_alternatives(spec_.attacker_goal, "/attacker_goal");
    if (spec_.attacker_goal.empty()) {
      warning("empty-goal", "empty goal is trivially satisfied",
              "/attacker_goal");
    }
  }

  void check_metrics_eval() {
    for (std::size_t i = 0; i < spec_.metrics.size(); ++i) {
      if (!is_builtin_metric(spec_.metrics[i])) {
        error("unknown-metric", "metric '" + spec_.metrics[i] + "' is not known",
              "/metrics/" + std::to_string(i));
      }
    }
    for (std::size_t r = 0; r < 2; ++r) {
      if (spec_.eval.weights[r].size() != spec_.metrics.size()) {
        error("eval-dimension",
              "weight row has " + std::to_string(spec_.eval.weights[r].size()) +
                  " entries for " + std::to_string(spec_.metrics.size()) +
                  " metrics",
              "/eval/weights/" + std::to_string(r));
      }
    }
  }

  void check_reachability() {
    if (has_errors(diagnostics_) || spec_.attacker_goal.empty()) return;
    const PropertyClosure closure(spec_);
    if (!closure.pre_satisfiable(spec_.attacker_goal)) {
      warning("goal-unreachable",
              "attacker goal is unreachable even when every action is applied "
              "freely",
              "/attacker_goal");
    }
  }

  const ScenarioSpec& spec_;
  std::set<std::string> node_ids_;
  std::set<std::string> agent_ids_;
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace

std::vector<Diagnostic> validate(const ScenarioSpec& spec) {
  ScenarioSpec derived = spec;
  derive_action_ids(derived);
  return Validator(derived).run();
}

}  // namespace mcas
