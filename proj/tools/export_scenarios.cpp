// Regenerates the bundled scenario files from their code constructors.
// Usage: mcas-export-scenarios <output dir>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mcas/gallium.hpp"
#include "mcas/scenario.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "scenarios";
  std::filesystem::create_directories(dir);
  const std::pair<const char*, mcas::ScenarioSpec> bundles[] = {
      {"gallium.json", mcas::build_gallium()},
      {"gallium_marl.json", mcas::build_gallium_marl()},
      {"toy.json", mcas::build_toy()},
  };
  for (const auto& [name, spec] : bundles) {
    std::ofstream out(dir / name, std::ios::binary);
    out << mcas::save_scenario(spec);
    std::cout << (dir / name).string() << "\n";
  }
  return 0;
}
