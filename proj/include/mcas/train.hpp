#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mcas/behavior.hpp"
#include "mcas/environment.hpp"
#include "mcas/scenario.hpp"

namespace mcas {

/// Teams whose agents act during a curriculum phase; inactive agents take the
/// no-op action every turn.
struct TrainPhase {
  bool attackers_active = true;
  bool defenders_active = false;
  int episodes = 0;

  bool operator==(const TrainPhase&) const = default;
};

/// Parses "attackers:1000,both:500" (teams: attackers | defenders | both).
std::vector<TrainPhase> parse_phases(std::string_view text);

/// One curve point per (episode, agent).
struct CurveRow {
  int episode = 0;  // global, across phases
  std::string agent;
  double episode_return = 0.0;
  int path_length = 0;
  bool success = false;

  bool operator==(const CurveRow&) const = default;
};

struct TrainResult {
  std::map<std::string, QTable> tables;  // per qlearning agent
  std::vector<CurveRow> curves;
  int episodes = 0;
};

/// Curriculum training: runs run_episode per phase with episode seeds
/// seed + global_episode_index, updating the Q tables of active
/// qlearning-configured agents online. Epsilon decays linearly per phase
/// (over epsilon_decay_episodes, default 80% of the phase).
TrainResult train_curriculum(const ScenarioSpec& spec,
                             const std::vector<TrainPhase>& phases,
                             std::uint64_t seed);

/// CSV export: episode,agent,return,path_length,success
std::string curves_csv_header();
std::string curves_to_csv(const std::vector<CurveRow>& curves);

/// Canonical JSON of all trained tables, keyed by agent id.
std::string tables_to_json(const std::map<std::string, QTable>& tables);

}  // namespace mcas
