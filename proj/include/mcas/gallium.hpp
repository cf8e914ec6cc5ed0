#pragma once

#include "mcas/scenario.hpp"

namespace mcas {

/// The bundled case study: a small-company network of 15 nodes in 5 subnets
/// (Outside, DMZ, ACC, MAR, SRV), 30 actions, two attackers entering from
/// At1/At2 and two defenders on WS/DB. The attacker goal is exfiltrating the
/// DB server's data and installing spyware on the PS printer server; the
/// shortest attacker action path has length 16.
///
/// Agents carry the scripted decision-tree behaviors (the DT battle).
ScenarioSpec build_gallium();

/// Same scenario with qlearning-configured attackers, for curriculum
/// training runs.
ScenarioSpec build_gallium_marl();

/// Oracle-sized fixture: 2 nodes, 4 actions, 1 random attacker, goal
/// reachable in 3 steps, full state space small enough for brute force.
ScenarioSpec build_toy();

}  // namespace mcas
