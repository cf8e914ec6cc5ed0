#include "mcas/environment.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "json.hpp"
#include "mcas/errors.hpp"
#include "mcas/log.hpp"

namespace mcas {

namespace {

/// Shortest round-trip decimal form, stable across platforms.
std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string_view termination_name(TerminationStatus status) {
  switch (status) {
    case TerminationStatus::Running:
      return "running";
    case TerminationStatus::AttackerGoalReached:
      return "attacker_goal_reached";
    case TerminationStatus::MaxCyclesReached:
      return "max_cycles_reached";
  }
  return "running";
}

Environment::Environment(ScenarioSpec spec) : spec_(std::move(spec)) {
  derive_action_ids(spec_);
  const auto diagnostics = validate(spec_);
  if (has_errors(diagnostics)) {
    std::string detail;
    for (const auto& d : diagnostics) {
      if (d.severity == Severity::Error) {
        detail += detail.empty() ? "" : "; ";
        detail += d.code + " at " + d.location;
      }
    }
    throw InvalidScenario("scenario '" + spec_.name + "': " + detail);
  }
  cycle_actions_.assign(spec_.agents.size(), std::string(kPassAction));
  last_obs_.resize(spec_.agents.size());
}

Environment::ResetResult Environment::reset(std::uint64_t seed) {
  state_ = EnvState{};
  for (const NodeSpec& node : spec_.nodes) {
    for (const Property& p : node.properties) {
      state_.set(p.id, p.value.str());
    }
  }
  cursor_ = 0;
  cycle_ = 0;
  last_rewards_ = RewardPair{};
  rng_ = Rng(derive_seed(seed, 0));
  std::fill(cycle_actions_.begin(), cycle_actions_.end(),
            std::string(kPassAction));
  status_ = spec_.max_cycles <= 0 ? TerminationStatus::MaxCyclesReached
                                  : TerminationStatus::Running;

  ResetResult result;
  result.state = state_;
  result.observations.reserve(spec_.agents.size());
  for (std::size_t i = 0; i < spec_.agents.size(); ++i) {
    last_obs_[i] = observe(state_, spec_.agents[i]);
    result.observations.push_back(last_obs_[i]);
  }
  return result;
}

StepOutcome Environment::step(std::size_t agent_cursor,
                              const std::string& chosen_action) {
  if (status_ != TerminationStatus::Running) {
    throw OutOfTurn("episode already terminated");
  }
  if (agent_cursor != cursor_) {
    throw OutOfTurn("agent index " + std::to_string(agent_cursor) +
                    " acted on turn of index " + std::to_string(cursor_));
  }
  const AgentSpec& agent = spec_.agents[cursor_];

  StepOutcome outcome;
  if (chosen_action != kPassAction) {
    const ActionSpec* action = spec_.find_action(chosen_action);
    if (action == nullptr) {
      throw UnknownAction("unknown action '" + chosen_action + "'");
    }
    if (!action->allows(agent.id)) {
      throw ActionNotAllowedForAgent("action '" + chosen_action +
                                     "' is not allowed for agent '" +
                                     agent.id + "'");
    }
    if (precondition_satisfied(state_, *action)) {
      const bool success = action->success_prob >= 1.0 ||
                           rng_.uniform_double() < action->success_prob;
      if (success) {
        state_ = apply_action(state_, *action);
        outcome.applied = true;
      }
    }
    log_debug("turn cycle=", cycle_ + 1, " agent=", agent.id,
              " action=", chosen_action, " applied=", outcome.applied);
  }

  cycle_actions_[cursor_] = chosen_action;
  last_obs_[cursor_] = observe(state_, agent);
  outcome.new_state_digest = state_.digest();
  outcome.observation = last_obs_[cursor_];

  const bool last_of_cycle = cursor_ + 1 == spec_.agents.size();
  if (last_of_cycle) {
    ++cycle_;
    const MetricVector metrics = compute_metrics(spec_, state_, cycle_actions_);
    last_rewards_ = eval_rewards(metrics, spec_.eval);
    outcome.cycle_rewards = last_rewards_;
    if (satisfied(spec_.attacker_goal, state_)) {
      status_ = TerminationStatus::AttackerGoalReached;
    } else if (cycle_ >= spec_.max_cycles) {
      status_ = TerminationStatus::MaxCyclesReached;
    }
    std::fill(cycle_actions_.begin(), cycle_actions_.end(),
              std::string(kPassAction));
  }
  cursor_ = (cursor_ + 1) % spec_.agents.size();
  outcome.terminal = status_;
  return outcome;
}

const Observation& Environment::last_observation(std::size_t agent_index) const {
  return last_obs_.at(agent_index);
}

double Environment::delivered_reward(std::size_t agent_index) const {
  return spec_.agents.at(agent_index).team == Team::Attacker
             ? last_rewards_.attacker
             : last_rewards_.defender;
}

int EpisodeLog::attacker_path_length() const {
  int total = 0;
  for (const AgentEpisodeStats& s : stats) {
    if (s.team == Team::Attacker) total += s.path_length;
  }
  return total;
}

EpisodeLog run_episode(const ScenarioSpec& spec,
                       const std::vector<Behavior*>& behaviors,
                       std::uint64_t seed, int episode_index) {
  Environment env(spec);
  const std::size_t n = env.scenario().agents.size();
  if (behaviors.size() != n) {
    throw Error("run_episode: need one behavior per agent");
  }

  env.reset(seed);
  std::vector<Rng> rngs;
  rngs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rngs.emplace_back(derive_seed(seed, i + 1));
  }

  EpisodeLog log;
  log.episode = episode_index;
  std::vector<std::set<std::string>> applied_actions(n);
  std::vector<double> returns(n, 0.0);

  for (Behavior* b : behaviors) b->begin_episode();

  while (env.status() == TerminationStatus::Running) {
    const std::size_t i = env.current_agent_index();
    const AgentSpec& agent = env.scenario().agents[i];
    const double reward_in = env.delivered_reward(i);
    const std::string action = behaviors[i]->choose(env.last_observation(i),
                                                    reward_in, rngs[i]);
    const int cycle_no = env.cycle() + 1;
    const StepOutcome out = env.step(i, action);

    StepRecord record;
    record.cycle = cycle_no;
    record.agent = agent.id;
    record.action = action;
    record.applied = out.applied;
    record.terminal = out.terminal;
    if (out.cycle_rewards) {
      record.att_reward = out.cycle_rewards->attacker;
      record.def_reward = out.cycle_rewards->defender;
      for (std::size_t k = 0; k < n; ++k) {
        returns[k] += env.scenario().agents[k].team == Team::Attacker
                          ? out.cycle_rewards->attacker
                          : out.cycle_rewards->defender;
      }
    }
    log.records.push_back(std::move(record));
    if (out.applied && action != kPassAction) applied_actions[i].insert(action);
  }

  log.terminal = env.status();
  log.cycles = env.cycle();
  for (std::size_t i = 0; i < n; ++i) {
    const AgentSpec& agent = env.scenario().agents[i];
    behaviors[i]->finish_episode(env.delivered_reward(i));
    AgentEpisodeStats stats;
    stats.agent = agent.id;
    stats.team = agent.team;
    stats.episode_return = returns[i];
    stats.path_length = static_cast<int>(applied_actions[i].size());
    stats.success = log.success();
    log.stats.push_back(std::move(stats));
  }
  log_info("episode ", episode_index, " seed=", seed, " terminal=",
           termination_name(log.terminal), " cycles=", log.cycles,
           " attacker_path=", log.attacker_path_length());
  return log;
}

std::string episode_to_jsonl(const EpisodeLog& log) {
  std::string out;
  for (const StepRecord& r : log.records) {
    nlohmann::ordered_json line;
    line["episode"] = log.episode;
    line["cycle"] = r.cycle;
    line["agent"] = r.agent;
    line["action"] = r.action;
    line["applied"] = r.applied;
    line["att_reward"] = r.att_reward;
    line["def_reward"] = r.def_reward;
    line["terminal"] = termination_name(r.terminal);
    out += line.dump();
    out += '\n';
  }
  return out;
}

std::string summary_csv_header(const ScenarioSpec& spec) {
  std::string header = "episode,terminal,cycles,success";
  for (const AgentSpec& agent : spec.agents) {
    header += ",return_" + agent.id + ",path_" + agent.id;
  }
  return header + "\n";
}

std::string summary_csv_row(const EpisodeLog& log) {
  std::string row = std::to_string(log.episode);
  row += ",";
  row += termination_name(log.terminal);
  row += "," + std::to_string(log.cycles);
  row += log.success() ? ",1" : ",0";
  for (const AgentEpisodeStats& s : log.stats) {
    row += "," + format_double(s.episode_return);
    row += "," + std::to_string(s.path_length);
  }
  return row + "\n";
}

}  // namespace mcas
