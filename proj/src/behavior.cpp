#include "mcas/behavior.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"
#include "mcas/errors.hpp"

namespace mcas {

double QTable::value(ObservationKey key, const std::string& action) const {
  const auto row = rows_.find(key);
  if (row == rows_.end()) return 0.0;
  const auto it = row->second.find(action);
  return it == row->second.end() ? 0.0 : it->second;
}

void QTable::set(ObservationKey key, const std::string& action, double v) {
  rows_[key][action] = v;
}

double QTable::row_max(ObservationKey key) const {
  const auto row = rows_.find(key);
  if (row == rows_.end() || row->second.empty()) return 0.0;
  double best = 0.0;
  bool first = true;
  for (const auto& [action, v] : row->second) {
    if (first || v > best) best = v;
    first = false;
  }
  return best;
}

std::size_t QTable::entry_count() const {
  std::size_t n = 0;
  for (const auto& [key, row] : rows_) n += row.size();
  return n;
}

void q_update(QTable& table, ObservationKey s, const std::string& a, double r,
              ObservationKey s_next, double alpha, double gamma) {
  const double q = table.value(s, a);
  table.set(s, a, q + alpha * (r + gamma * table.row_max(s_next) - q));
}

std::string qtable_to_json(const QTable& table) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, row] : table.rows()) {
    nlohmann::json jrow = nlohmann::json::object();
    for (const auto& [action, v] : row) jrow[action] = v;
    doc[observation_key_hex(key)] = std::move(jrow);
  }
  return doc.dump(2) + "\n";
}

QTable qtable_from_json(std::string_view text) {
  QTable table;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("qtable: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("qtable: expected object");
  for (const auto& [hex, row] : doc.items()) {
    ObservationKey key = 0;
    try {
      key = std::stoull(hex, nullptr, 16);
    } catch (const std::exception&) {
      throw SchemaError("qtable: bad observation key '" + hex + "'");
    }
    if (!row.is_object()) throw SchemaError("qtable: expected row object");
    for (const auto& [action, v] : row.items()) {
      if (!v.is_number()) throw SchemaError("qtable: value must be a number");
      table.set(key, action, v.get<double>());
    }
  }
  return table;
}

double epsilon_at(const QLearningConfig& config, int episode,
                  int decay_episodes) {
  if (decay_episodes <= 0 || episode >= decay_episodes) {
    return config.epsilon_end;
  }
  const double t = static_cast<double>(episode) / decay_episodes;
  return config.epsilon_start + (config.epsilon_end - config.epsilon_start) * t;
}

RandomBehavior::RandomBehavior(std::vector<std::string> action_ids)
    : action_ids_(std::move(action_ids)) {
  if (action_ids_.empty()) {
    throw std::invalid_argument("random behavior needs a non-empty action set");
  }
}

const std::string& RandomBehavior::choose(const Observation&, double,
                                          Rng& rng) {
  return action_ids_[rng.uniform_index(action_ids_.size())];
}

DecisionTreeBehavior::DecisionTreeBehavior(DecisionTree tree)
    : tree_(std::move(tree)) {}

const std::string& DecisionTreeBehavior::choose(const Observation& observation,
                                                double, Rng&) {
  if (tree_.nodes.empty()) return pass_;
  int index = 0;
  while (true) {
    const DecisionTree::Node& node = tree_.nodes[static_cast<std::size_t>(index)];
    if (node.leaf) return node.action;
    index = satisfied(node.condition, observation.properties) ? node.on_true
                                                              : node.on_false;
  }
}

QLearningBehavior::QLearningBehavior(QLearningConfig config,
                                     std::vector<std::string> action_ids)
    : config_(std::move(config)), action_ids_(std::move(action_ids)) {
  if (action_ids_.empty()) {
    throw std::invalid_argument(
        "qlearning behavior needs a non-empty action set");
  }
}

const std::string& QLearningBehavior::greedy(ObservationKey key) const {
  // Argmax over the agent's action order; strict > keeps the lowest index on
  // ties, which makes greedy play deterministic.
  const std::string* best = &action_ids_.front();
  double best_value = table_.value(key, action_ids_.front());
  for (std::size_t i = 1; i < action_ids_.size(); ++i) {
    const double v = table_.value(key, action_ids_[i]);
    if (v > best_value) {
      best_value = v;
      best = &action_ids_[i];
    }
  }
  return *best;
}

const std::string& QLearningBehavior::choose(const Observation& observation,
                                             double last_reward, Rng& rng) {
  const ObservationKey key = encode_observation(observation);
  if (learning_ && has_last_) {
    q_update(table_, last_key_, last_action_, last_reward, key, config_.alpha,
             config_.gamma);
  }
  const std::string& picked =
      (epsilon_ > 0.0 && rng.uniform_double() < epsilon_)
          ? action_ids_[rng.uniform_index(action_ids_.size())]
          : greedy(key);
  last_key_ = key;
  last_action_ = picked;
  has_last_ = true;
  return picked;
}

void QLearningBehavior::begin_episode() { has_last_ = false; }

void QLearningBehavior::finish_episode(double final_reward) {
  if (learning_ && has_last_) {
    // Terminal transition: no bootstrap.
    const double q = table_.value(last_key_, last_action_);
    table_.set(last_key_, last_action_,
               q + config_.alpha * (final_reward - q));
  }
  has_last_ = false;
}

std::unique_ptr<Behavior> make_behavior(const AgentSpec& agent) {
  if (std::holds_alternative<RandomConfig>(agent.behavior)) {
    return std::make_unique<RandomBehavior>(agent.action_ids);
  }
  if (const auto* dt = std::get_if<DecisionTreeConfig>(&agent.behavior)) {
    return std::make_unique<DecisionTreeBehavior>(dt->tree);
  }
  const auto& q = std::get<QLearningConfig>(agent.behavior);
  return std::make_unique<QLearningBehavior>(q, agent.action_ids);
}

}  // namespace mcas
