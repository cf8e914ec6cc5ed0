#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mcas/behavior.hpp"
#include "mcas/environment.hpp"
#include "mcas/errors.hpp"
#include "mcas/gallium.hpp"
#include "mcas/scenario.hpp"
#include "mcas/search.hpp"
#include "mcas/train.hpp"

namespace py = pybind11;

namespace {

using MatcherTuple = std::pair<std::string, std::optional<std::string>>;

mcas::EnvState dict_to_state(const py::dict& entries) {
  mcas::EnvState state;
  for (const auto& item : entries) {
    state.set(mcas::PropertyId(py::cast<std::string>(item.first)),
              py::cast<std::string>(item.second));
  }
  return state;
}

py::dict state_to_dict(const mcas::EnvState& state) {
  py::dict out;
  for (const auto& [id, value] : state) {
    out[py::str(id.str())] = value;
  }
  return out;
}

mcas::PreAlternatives to_alternatives(
    const std::vector<std::vector<MatcherTuple>>& alternatives) {
  mcas::PreAlternatives out;
  for (const auto& conj : alternatives) {
    mcas::Conjunction c;
    for (const auto& [id, value] : conj) {
      c.push_back(mcas::PropertyPattern{mcas::PropertyId(id), value});
    }
    out.push_back(std::move(c));
  }
  return out;
}

mcas::ActionSpec make_action(
    const std::string& name, const std::vector<std::string>& agents,
    const std::vector<std::vector<MatcherTuple>>& pre,
    const std::vector<MatcherTuple>& post, double success_prob) {
  mcas::ActionSpec action;
  action.name = name;
  action.agents = agents;
  action.pre = to_alternatives(pre);
  for (const auto& [id, value] : post) {
    action.post.push_back(mcas::Property{
        mcas::PropertyId(id), value ? mcas::PropertyValue::text(*value)
                                    : mcas::PropertyValue::absent()});
  }
  action.success_prob = success_prob;
  return action;
}

py::object outcome_to_py(const mcas::StepOutcome& outcome) {
  py::dict out;
  out["applied"] = outcome.applied;
  out["new_state_digest"] = outcome.new_state_digest;
  out["observation"] = state_to_dict(outcome.observation.properties);
  if (outcome.cycle_rewards) {
    out["cycle_rewards"] =
        py::make_tuple(outcome.cycle_rewards->attacker,
                       outcome.cycle_rewards->defender);
  } else {
    out["cycle_rewards"] = py::none();
  }
  out["terminal"] = std::string(mcas::termination_name(outcome.terminal));
  return out;
}

py::dict log_to_py(const mcas::EpisodeLog& log) {
  py::dict out;
  out["episode"] = log.episode;
  out["terminal"] = std::string(mcas::termination_name(log.terminal));
  out["cycles"] = log.cycles;
  out["success"] = log.success();
  out["attacker_path_length"] = log.attacker_path_length();
  py::list records;
  for (const mcas::StepRecord& r : log.records) {
    py::dict rec;
    rec["cycle"] = r.cycle;
    rec["agent"] = r.agent;
    rec["action"] = r.action;
    rec["applied"] = r.applied;
    rec["att_reward"] = r.att_reward;
    rec["def_reward"] = r.def_reward;
    rec["terminal"] = std::string(mcas::termination_name(r.terminal));
    records.append(std::move(rec));
  }
  out["records"] = std::move(records);
  py::list stats;
  for (const mcas::AgentEpisodeStats& s : log.stats) {
    py::dict row;
    row["agent"] = s.agent;
    row["team"] = std::string(mcas::team_name(s.team));
    row["return"] = s.episode_return;
    row["path_length"] = s.path_length;
    row["success"] = s.success;
    stats.append(std::move(row));
  }
  out["stats"] = std::move(stats);
  return out;
}

std::vector<std::unique_ptr<mcas::Behavior>> configured_behaviors(
    const mcas::ScenarioSpec& spec, bool defenders_passive) {
  std::vector<std::unique_ptr<mcas::Behavior>> behaviors;
  for (const mcas::AgentSpec& agent : spec.agents) {
    if (defenders_passive && agent.team == mcas::Team::Defender) {
      behaviors.push_back(std::make_unique<mcas::PassBehavior>());
    } else {
      behaviors.push_back(mcas::make_behavior(agent));
      if (auto* q =
              dynamic_cast<mcas::QLearningBehavior*>(behaviors.back().get())) {
        q->set_epsilon(0.0);
        q->set_learning(false);
      }
    }
  }
  return behaviors;
}

std::vector<mcas::TrainPhase> to_phases(
    const std::vector<std::pair<std::string, int>>& phases) {
  std::vector<mcas::TrainPhase> out;
  for (const auto& [team, episodes] : phases) {
    mcas::TrainPhase phase;
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
      throw mcas::Error("phase team must be attackers, defenders or both");
    }
    phase.episodes = episodes;
    out.push_back(phase);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_mcas, m) {
  m.doc() = "Turn-based multi-agent cyber attack/defense battle simulator";

  py::register_exception<mcas::Error>(m, "McasError");

  py::class_<mcas::ActionSpec>(m, "ActionSpec")
      .def(py::init(&make_action), py::arg("name"), py::arg("agents"),
           py::arg("pre"), py::arg("post"), py::arg("success_prob") = 1.0,
           "pre: [[(id, value-or-None)]] (None = any value); "
           "post: [(id, value-or-None)] (None = delete)")
      .def_readonly("name", &mcas::ActionSpec::name)
      .def_readonly("agents", &mcas::ActionSpec::agents)
      .def_readonly("success_prob", &mcas::ActionSpec::success_prob);

  py::class_<mcas::Diagnostic>(m, "Diagnostic")
      .def_property_readonly("severity",
                             [](const mcas::Diagnostic& d) {
                               return d.severity == mcas::Severity::Error
                                          ? "error"
                                          : "warning";
                             })
      .def_readonly("code", &mcas::Diagnostic::code)
      .def_readonly("message", &mcas::Diagnostic::message)
      .def_readonly("location", &mcas::Diagnostic::location)
      .def("__repr__", [](const mcas::Diagnostic& d) {
        return "<Diagnostic " + d.code + " at " + d.location + ">";
      });

  py::class_<mcas::ScenarioSpec>(m, "ScenarioSpec")
      .def_readonly("name", &mcas::ScenarioSpec::name)
      .def_readonly("max_cycles", &mcas::ScenarioSpec::max_cycles)
      .def_readonly("metrics", &mcas::ScenarioSpec::metrics)
      .def_property_readonly("nodes",
                             [](const mcas::ScenarioSpec& s) {
                               std::vector<std::string> ids;
                               for (const auto& n : s.nodes) ids.push_back(n.id);
                               return ids;
                             })
      .def_property_readonly("actions",
                             [](const mcas::ScenarioSpec& s) {
                               std::vector<std::string> names;
                               for (const auto& a : s.actions)
                                 names.push_back(a.name);
                               return names;
                             })
      .def_property_readonly("agents",
                             [](const mcas::ScenarioSpec& s) {
                               std::vector<std::string> ids;
                               for (const auto& a : s.agents)
                                 ids.push_back(a.id);
                               return ids;
                             })
      .def("action", [](const mcas::ScenarioSpec& s, const std::string& name) {
        const mcas::ActionSpec* action = s.find_action(name);
        if (action == nullptr) throw mcas::UnknownAction(name);
        return *action;
      })
      .def("__repr__", [](const mcas::ScenarioSpec& s) {
        return "<ScenarioSpec '" + s.name + "': " +
               std::to_string(s.nodes.size()) + " nodes, " +
               std::to_string(s.actions.size()) + " actions, " +
               std::to_string(s.agents.size()) + " agents>";
      });

  m.def("parse_scenario",
        [](const std::string& text) { return mcas::parse_scenario(text); });
  m.def("load_scenario",
        [](const std::string& text) { return mcas::load_scenario(text); });
  m.def("save_scenario", &mcas::save_scenario);
  m.def("validate", &mcas::validate);

  m.def("build_gallium", &mcas::build_gallium);
  m.def("build_gallium_marl", &mcas::build_gallium_marl);
  m.def("build_toy", &mcas::build_toy);

  m.def(
      "precondition_satisfied",
      [](const py::dict& state, const mcas::ActionSpec& action) {
        return mcas::precondition_satisfied(dict_to_state(state), action);
      },
      py::arg("state"), py::arg("action"));
  m.def(
      "apply_action",
      [](const py::dict& state, const mcas::ActionSpec& action) {
        return state_to_dict(mcas::apply_action(dict_to_state(state), action));
      },
      py::arg("state"), py::arg("action"));

  m.def(
      "compute_metrics",
      [](const mcas::ScenarioSpec& spec, const py::dict& state,
         const std::vector<std::string>& joint_action) {
        const mcas::MetricVector v =
            mcas::compute_metrics(spec, dict_to_state(state), joint_action);
        py::dict out;
        for (std::size_t i = 0; i < v.names.size(); ++i) {
          out[py::str(v.names[i])] = v.values[i];
        }
        return out;
      },
      py::arg("scenario"), py::arg("state"),
      py::arg("joint_action") = std::vector<std::string>{});
  m.def(
      "cycle_rewards",
      [](const mcas::ScenarioSpec& spec, const py::dict& state) {
        const auto metrics = mcas::compute_metrics(spec, dict_to_state(state),
                                                   std::vector<std::string>{});
        const auto rewards = mcas::eval_rewards(metrics, spec.eval);
        return py::make_tuple(rewards.attacker, rewards.defender);
      },
      py::arg("scenario"), py::arg("state"),
      "Eval of the configured metrics on a state: (attacker, defender)");

  m.def(
      "encode_observation",
      [](const py::dict& observation) {
        return mcas::encode_observation(
            mcas::Observation{dict_to_state(observation)});
      },
      py::arg("observation"));

  py::class_<mcas::QTable>(m, "QTable")
      .def(py::init<>())
      .def("value", &mcas::QTable::value)
      .def("set", &mcas::QTable::set)
      .def("row_max", &mcas::QTable::row_max)
      .def("entry_count", &mcas::QTable::entry_count)
      .def("to_json", [](const mcas::QTable& t) { return mcas::qtable_to_json(t); });
  m.def("qtable_from_json",
        [](const std::string& text) { return mcas::qtable_from_json(text); });
  m.def("q_update", &mcas::q_update, py::arg("table"), py::arg("s"),
        py::arg("a"), py::arg("r"), py::arg("s_next"), py::arg("alpha"),
        py::arg("gamma"));

  py::class_<mcas::Environment>(m, "Environment")
      .def(py::init<mcas::ScenarioSpec>())
      .def("reset",
           [](mcas::Environment& env, std::uint64_t seed) {
             const auto result = env.reset(seed);
             py::list observations;
             for (const auto& obs : result.observations) {
               observations.append(state_to_dict(obs.properties));
             }
             return py::make_tuple(state_to_dict(result.state), observations);
           },
           py::arg("seed"))
      .def("step",
           [](mcas::Environment& env, std::size_t cursor,
              const std::string& action) {
             return outcome_to_py(env.step(cursor, action));
           },
           py::arg("agent_cursor"), py::arg("action"))
      .def_property_readonly("state",
                             [](const mcas::Environment& env) {
                               return state_to_dict(env.state());
                             })
      .def_property_readonly("current_agent_index",
                             &mcas::Environment::current_agent_index)
      .def_property_readonly("cycle", &mcas::Environment::cycle)
      .def_property_readonly("terminal", [](const mcas::Environment& env) {
        return std::string(mcas::termination_name(env.status()));
      });

  m.def(
      "run_episode",
      [](const mcas::ScenarioSpec& spec, std::uint64_t seed, int episode,
         bool defenders_passive) {
        auto behaviors = configured_behaviors(spec, defenders_passive);
        std::vector<mcas::Behavior*> raw;
        raw.reserve(behaviors.size());
        for (auto& b : behaviors) raw.push_back(b.get());
        return log_to_py(mcas::run_episode(spec, raw, seed, episode));
      },
      py::arg("scenario"), py::arg("seed") = 0, py::arg("episode") = 0,
      py::arg("defenders_passive") = false,
      "Play one episode with the scenario's configured behaviors");

  m.def(
      "episode_jsonl",
      [](const mcas::ScenarioSpec& spec, std::uint64_t seed, int episode,
         bool defenders_passive) {
        auto behaviors = configured_behaviors(spec, defenders_passive);
        std::vector<mcas::Behavior*> raw;
        for (auto& b : behaviors) raw.push_back(b.get());
        return mcas::episode_to_jsonl(
            mcas::run_episode(spec, raw, seed, episode));
      },
      py::arg("scenario"), py::arg("seed") = 0, py::arg("episode") = 0,
      py::arg("defenders_passive") = false);

  m.def(
      "shortest_goal_path",
      [](const mcas::ScenarioSpec& spec, std::uint64_t budget)
          -> py::object {
        const auto path = mcas::shortest_goal_path(spec, budget);
        if (!path) return py::none();
        py::list out;
        for (const auto& step : *path) {
          out.append(py::make_tuple(step.agent, step.action));
        }
        return out;
      },
      py::arg("scenario"), py::arg("budget") = mcas::kDefaultSearchBudget);

  m.def(
      "train_curriculum",
      [](const mcas::ScenarioSpec& spec,
         const std::vector<std::pair<std::string, int>>& phases,
         std::uint64_t seed) {
        const mcas::TrainResult result =
            mcas::train_curriculum(spec, to_phases(phases), seed);
        py::dict out;
        py::list curves;
        for (const mcas::CurveRow& row : result.curves) {
          py::dict r;
          r["episode"] = row.episode;
          r["agent"] = row.agent;
          r["return"] = row.episode_return;
          r["path_length"] = row.path_length;
          r["success"] = row.success;
          curves.append(std::move(r));
        }
        out["curves"] = std::move(curves);
        py::dict tables;
        for (const auto& [agent, table] : result.tables) {
          tables[py::str(agent)] = table;
        }
        out["tables"] = std::move(tables);
        out["episodes"] = result.episodes;
        return out;
      },
      py::arg("scenario"), py::arg("phases"), py::arg("seed") = 0);
}
