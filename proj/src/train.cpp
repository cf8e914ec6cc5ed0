#include "mcas/train.hpp"

#include <charconv>
#include <stdexcept>

#include "json.hpp"
#include "mcas/errors.hpp"
#include "mcas/log.hpp"

namespace mcas {

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<TrainPhase> parse_phases(std::string_view text) {
  std::vector<TrainPhase> phases;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view part = text.substr(start, end - start);
    if (!part.empty()) {
      const std::size_t colon = part.find(':');
      if (colon == std::string_view::npos) {
        throw Error("phase '" + std::string(part) + "': expected team:episodes");
      }
      const std::string_view team = part.substr(0, colon);
      TrainPhase phase;
      if (team == "attackers") {
        phase.attackers_active = true;
        phase.defenders_active = false;
      } else if (team == "defenders") {
        phase.attackers_active = false;
        phase.defenders_active = true;
      } else if (team == "both") {
        phase.attackers_active = true;
        phase.defenders_active = true;
      } else {
        throw Error("phase team must be attackers, defenders or both, got '" +
                    std::string(team) + "'");
      }
      const std::string_view count = part.substr(colon + 1);
      int episodes = 0;
      const auto res =
          std::from_chars(count.data(), count.data() + count.size(), episodes);
      if (res.ec != std::errc{} || res.ptr != count.data() + count.size() ||
          episodes < 0) {
        throw Error("phase '" + std::string(part) + "': bad episode count");
      }
      phase.episodes = episodes;
      phases.push_back(phase);
    }
    start = end + 1;
  }
  return phases;
}

TrainResult train_curriculum(const ScenarioSpec& spec,
                             const std::vector<TrainPhase>& phases,
                             std::uint64_t seed) {
  ScenarioSpec scenario = spec;
  derive_action_ids(scenario);

  // Persistent behaviors: Q tables live across episodes and phases.
  std::vector<std::unique_ptr<Behavior>> owned;
  std::vector<QLearningBehavior*> learners(scenario.agents.size(), nullptr);
  PassBehavior pass;
  owned.reserve(scenario.agents.size());
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    owned.push_back(make_behavior(scenario.agents[i]));
    learners[i] = dynamic_cast<QLearningBehavior*>(owned[i].get());
  }

  TrainResult result;
  int global_episode = 0;
  for (const TrainPhase& phase : phases) {
    std::vector<Behavior*> active(scenario.agents.size(), nullptr);
    for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
      const bool team_active = scenario.agents[i].team == Team::Attacker
                                   ? phase.attackers_active
                                   : phase.defenders_active;
      active[i] = team_active ? owned[i].get() : &pass;
    }
    for (int e = 0; e < phase.episodes; ++e, ++global_episode) {
      for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
        if (learners[i] == nullptr || active[i] != owned[i].get()) continue;
        const QLearningConfig& config = learners[i]->config();
        const int decay = config.epsilon_decay_episodes > 0
                              ? config.epsilon_decay_episodes
                              : (phase.episodes * 8) / 10;
        learners[i]->set_epsilon(epsilon_at(config, e, decay));
      }
      const EpisodeLog log = run_episode(
          scenario, active, seed + static_cast<std::uint64_t>(global_episode),
          global_episode);
      for (const AgentEpisodeStats& s : log.stats) {
        result.curves.push_back(CurveRow{global_episode, s.agent,
                                         s.episode_return, s.path_length,
                                         s.success});
      }
    }
  }
  result.episodes = global_episode;

  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    if (learners[i] != nullptr) {
      result.tables[scenario.agents[i].id] = learners[i]->table();
    }
  }
  log_info("training finished: ", result.episodes, " episodes, ",
           result.tables.size(), " trained tables");
  return result;
}

std::string curves_csv_header() {
  return "episode,agent,return,path_length,success\n";
}

std::string curves_to_csv(const std::vector<CurveRow>& curves) {
  std::string out = curves_csv_header();
  for (const CurveRow& row : curves) {
    out += std::to_string(row.episode);
    out += ",";
    out += row.agent;
    out += ",";
    out += format_double(row.episode_return);
    out += ",";
    out += std::to_string(row.path_length);
    out += row.success ? ",1\n" : ",0\n";
  }
  return out;
}

std::string tables_to_json(const std::map<std::string, QTable>& tables) {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [agent, table] : tables) {
    doc[agent] = nlohmann::json::parse(qtable_to_json(table));
  }
  return doc.dump(2) + "\n";
}

}  // namespace mcas
