#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcas/behavior.hpp"
#include "mcas/environment.hpp"
#include "mcas/errors.hpp"
#include "mcas/gallium.hpp"
#include "mcas/scenario.hpp"
#include "mcas/search.hpp"
#include "mcas/train.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mcas::Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mcas::Error("cannot write '" + path.string() + "'");
  out << content;
}

int cmd_validate(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const mcas::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  mcas::ScenarioSpec spec;
  try {
    spec = mcas::parse_scenario(text);
  } catch (const mcas::Error& e) {
    std::cerr << "parse failure: " << e.what() << "\n";
    return 2;
  }
  const auto diagnostics = mcas::validate(spec);
  for (const auto& d : diagnostics) {
    std::cout << (d.severity == mcas::Severity::Error ? "error" : "warning")
              << " " << d.code << " " << d.location << " " << d.message << "\n";
  }
  return mcas::has_errors(diagnostics) ? 1 : 0;
}

struct LoadedScenario {
  mcas::ScenarioSpec spec;
  bool ok = false;
};

LoadedScenario load_or_report(const std::string& path) {
  LoadedScenario result;
  try {
    result.spec = mcas::load_scenario(read_file(path));
    result.ok = true;
  } catch (const mcas::Error& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
  }
  return result;
}

/// Behaviors configured by the scenario; defenders can be forced passive and
/// qlearning agents run greedily (optionally from imported tables).
std::vector<std::unique_ptr<mcas::Behavior>> evaluation_behaviors(
    const mcas::ScenarioSpec& spec, bool defenders_passive,
    const std::string& qtables_path) {
  std::map<std::string, mcas::QTable> imported;
  if (!qtables_path.empty()) {
    nlohmann::json doc = nlohmann::json::parse(read_file(qtables_path));
    for (const auto& [agent, table] : doc.items()) {
      imported[agent] = mcas::qtable_from_json(table.dump());
    }
  }
  std::vector<std::unique_ptr<mcas::Behavior>> behaviors;
  for (const mcas::AgentSpec& agent : spec.agents) {
    if (defenders_passive && agent.team == mcas::Team::Defender) {
      behaviors.push_back(std::make_unique<mcas::PassBehavior>());
      continue;
    }
    behaviors.push_back(mcas::make_behavior(agent));
    if (auto* q = dynamic_cast<mcas::QLearningBehavior*>(behaviors.back().get())) {
      q->set_epsilon(0.0);
      q->set_learning(false);
      const auto it = imported.find(agent.id);
      if (it != imported.end()) q->table() = it->second;
    }
  }
  return behaviors;
}

int cmd_run(const std::string& path, int episodes, std::uint64_t seed,
            const std::string& defenders, const std::string& out_dir,
            const std::string& qtables_path) {
  auto loaded = load_or_report(path);
  if (!loaded.ok) return 1;
  if (defenders != "active" && defenders != "passive") {
    std::cerr << "error: --defenders must be active or passive\n";
    return 1;
  }
  fs::create_directories(out_dir);

  auto behaviors =
      evaluation_behaviors(loaded.spec, defenders == "passive", qtables_path);
  std::vector<mcas::Behavior*> raw;
  for (auto& b : behaviors) raw.push_back(b.get());

  std::ofstream jsonl(fs::path(out_dir) / "episodes.jsonl", std::ios::binary);
  std::ofstream summary(fs::path(out_dir) / "summary.csv", std::ios::binary);
  summary << mcas::summary_csv_header(loaded.spec);

  int successes = 0;
  for (int e = 0; e < episodes; ++e) {
    const mcas::EpisodeLog log = mcas::run_episode(
        loaded.spec, raw, seed + static_cast<std::uint64_t>(e), e);
    jsonl << mcas::episode_to_jsonl(log);
    summary << mcas::summary_csv_row(log);
    if (log.success()) ++successes;
  }
  std::cout << "episodes " << episodes << "\n";
  std::cout << "success_rate " << (episodes > 0 ? static_cast<double>(successes) / episodes : 0.0)
            << "\n";
  return 0;
}

int cmd_train(const std::string& path, const std::string& phases_text,
              std::uint64_t seed, const std::string& out_dir) {
  auto loaded = load_or_report(path);
  if (!loaded.ok) return 1;
  const bool any_qlearning = std::any_of(
      loaded.spec.agents.begin(), loaded.spec.agents.end(),
      [](const mcas::AgentSpec& a) {
        return std::holds_alternative<mcas::QLearningConfig>(a.behavior);
      });
  if (!any_qlearning) {
    std::cerr << "error: no agent has a qlearning behavior\n";
    return 1;
  }
  std::vector<mcas::TrainPhase> phases;
  try {
    phases = mcas::parse_phases(phases_text);
  } catch (const mcas::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  fs::create_directories(out_dir);

  const mcas::TrainResult result =
      mcas::train_curriculum(loaded.spec, phases, seed);
  write_file(fs::path(out_dir) / "curves.csv",
             mcas::curves_to_csv(result.curves));
  write_file(fs::path(out_dir) / "qtables.json",
             mcas::tables_to_json(result.tables));
  std::cout << "episodes " << result.episodes << "\n";
  std::cout << "tables " << result.tables.size() << "\n";
  return 0;
}

int cmd_graph(const std::string& path, const std::string& out_path) {
  auto loaded = load_or_report(path);
  if (!loaded.ok) return 1;
  const mcas::ScenarioSpec& spec = loaded.spec;

  // subnet -> sorted node set, plus sorted undirected edges
  std::map<std::string, std::set<std::string>> clusters;
  std::set<std::string> known;
  for (const mcas::NodeSpec& node : spec.nodes) known.insert(node.id);
  std::set<std::pair<std::string, std::string>> edges;
  for (const mcas::NodeSpec& node : spec.nodes) {
    std::string subnet = "net";
    std::string links;
    for (const mcas::Property& p : node.properties) {
      if (p.id.str() == node.id + ".subnet") subnet = p.value.str();
      if (p.id.str() == node.id + ".links") links = p.value.str();
    }
    clusters[subnet].insert(node.id);
    std::istringstream stream(links);
    std::string target;
    while (stream >> target) {
      if (known.count(target) == 0 || target == node.id) continue;
      edges.insert(node.id < target ? std::make_pair(node.id, target)
                                    : std::make_pair(target, node.id));
    }
  }

  std::ostringstream dot;
  dot << "strict graph \"" << spec.name << "\" {\n";
  for (const auto& [subnet, members] : clusters) {
    dot << "  subgraph \"cluster_" << subnet << "\" {\n";
    dot << "    label=\"" << subnet << "\";\n";
    for (const std::string& member : members) {
      dot << "    \"" << member << "\";\n";
    }
    dot << "  }\n";
  }
  for (const auto& [a, b] : edges) {
    dot << "  \"" << a << "\" -- \"" << b << "\";\n";
  }
  dot << "}\n";

  if (out_path.empty() || out_path == "-") {
    std::cout << dot.str();
  } else {
    write_file(out_path, dot.str());
  }
  return 0;
}

int cmd_shortest_path(const std::string& path, std::uint64_t budget) {
  auto loaded = load_or_report(path);
  if (!loaded.ok) return 1;
  const auto result = mcas::shortest_goal_path(loaded.spec, budget);
  if (!result) {
    std::cout << "unknown\n";
    return 0;
  }
  std::cout << "length " << result->size() << "\n";
  for (const mcas::GoalPathStep& step : *result) {
    std::cout << step.agent << " " << step.action << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mcas: turn-based cyber attacker/defender battle simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  auto* validate = app.add_subcommand("validate", "check a scenario file");
  validate->add_option("file", scenario_path, "scenario JSON")->required();

  int episodes = 1;
  std::uint64_t seed = 0;
  std::string defenders = "active";
  std::string out_dir = "out";
  std::string qtables_path;
  auto* run = app.add_subcommand("run", "play episodes and export logs");
  run->add_option("file", scenario_path, "scenario JSON")->required();
  run->add_option("--episodes", episodes, "episode count")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "base seed (episode i uses seed+i)");
  run->add_option("--defenders", defenders, "active|passive");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--qtables", qtables_path, "import trained Q tables (JSON)");

  std::string phases = "attackers:1000";
  auto* train = app.add_subcommand("train", "curriculum Q-learning");
  train->add_option("file", scenario_path, "scenario JSON")->required();
  train->add_option("--phases", phases,
                    "comma list of team:episodes (attackers|defenders|both)");
  train->add_option("--seed", seed, "base seed");
  train->add_option("--out", out_dir, "output directory");

  std::string dot_out;
  auto* graph = app.add_subcommand("graph", "export the topology as DOT");
  graph->add_option("file", scenario_path, "scenario JSON")->required();
  graph->add_option("--out", dot_out, "output .dot file ('-' = stdout)");

  std::uint64_t budget = mcas::kDefaultSearchBudget;
  auto* shortest =
      app.add_subcommand("shortest-path", "minimum attacker action path");
  shortest->add_option("file", scenario_path, "scenario JSON")->required();
  shortest->add_option("--budget", budget, "node expansion budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(scenario_path);
    if (run->parsed()) {
      return cmd_run(scenario_path, episodes, seed, defenders, out_dir,
                     qtables_path);
    }
    if (train->parsed()) return cmd_train(scenario_path, phases, seed, out_dir);
    if (graph->parsed()) return cmd_graph(scenario_path, dot_out);
    if (shortest->parsed()) return cmd_shortest_path(scenario_path, budget);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
