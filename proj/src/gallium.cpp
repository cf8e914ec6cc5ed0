#include "mcas/gallium.hpp"

#include <utility>

namespace mcas {

namespace {

Property set(const char* id, const char* value) {
  return Property{PropertyId(id), PropertyValue::text(value)};
}

Property del(const char* id) {
  return Property{PropertyId(id), PropertyValue::absent()};
}

PropertyPattern eq(const char* id, const char* value) {
  return PropertyPattern{PropertyId(id), std::string(value)};
}

PropertyPattern present(const char* id) {
  return PropertyPattern{PropertyId(id), std::nullopt};
}

NodeSpec node(const char* id, const char* subnet, const char* links,
              std::vector<Property> extra = {}) {
  NodeSpec n;
  n.id = id;
  const std::string base(id);
  n.properties.push_back(set((base + ".active").c_str(), "true"));
  n.properties.push_back(
      Property{PropertyId(base + ".subnet"), PropertyValue::text(subnet)});
  n.properties.push_back(
      Property{PropertyId(base + ".links"), PropertyValue::text(links)});
  for (Property& p : extra) n.properties.push_back(std::move(p));
  return n;
}

struct Rule {
  PreAlternatives condition;
  std::string action;
};

int add_rule(DecisionTree& tree, const std::vector<Rule>& rules, std::size_t i,
             const std::string& fallback) {
  if (i == rules.size()) return tree.add_leaf(fallback);
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  const int on_true = tree.add_leaf(rules[i].action);
  const int on_false = add_rule(tree, rules, i + 1, fallback);
  DecisionTree::Node branch;
  branch.leaf = false;
  branch.condition = rules[i].condition;
  branch.on_true = on_true;
  branch.on_false = on_false;
  tree.nodes[static_cast<std::size_t>(index)] = std::move(branch);
  return index;
}

/// First matching rule wins; no rule matches -> fallback action.
DecisionTreeConfig priority_tree(std::vector<Rule> rules, std::string fallback) {
  DecisionTreeConfig config;
  add_rule(config.tree, rules, 0, fallback);
  return config;
}

Rule when(PropertyPattern pattern, const char* action) {
  return Rule{PreAlternatives{Conjunction{std::move(pattern)}},
              std::string(action)};
}

ActionSpec attack(const char* name, PreAlternatives pre,
                  std::vector<Property> post) {
  ActionSpec a;
  a.name = name;
  a.agents = {"attacker1", "attacker2"};
  a.pre = std::move(pre);
  a.post = std::move(post);
  return a;
}

ActionSpec defend(const char* name, const char* agent, PreAlternatives pre,
                  std::vector<Property> post) {
  ActionSpec a;
  a.name = name;
  a.agents = {agent};
  a.pre = std::move(pre);
  a.post = std::move(post);
  return a;
}

PreAlternatives one(Conjunction conj) {
  return PreAlternatives{std::move(conj)};
}

}  // namespace

ScenarioSpec build_gallium() {
  ScenarioSpec spec;
  spec.name = "gallium";
  spec.max_cycles = 200;

  // 5 subnets, 15 nodes. The DMZ servers bridge the outside desktops and the
  // three internal subnets; inside nodes only reach the DMZ.
  const char* dmz = "ES FTP VPN WS";
  const char* inside = "API At1 At2 CTO DB DC E1 E2 E3 PS TAB";
  spec.nodes = {
      node("At1", "Outside", dmz),
      node("At2", "Outside", dmz),
      node("WS", "DMZ", inside, {set("WS.service.vulnerable", "true")}),
      node("ES", "DMZ", inside),
      node("VPN", "DMZ", inside, {set("VPN.service.exposed", "true")}),
      node("FTP", "DMZ", inside, {set("FTP.service.anonymous", "enabled")}),
      node("E1", "ACC", dmz),
      node("E2", "ACC", dmz),
      node("CTO", "ACC", dmz),
      node("PS", "MAR", dmz),
      node("E3", "MAR", dmz),
      node("TAB", "MAR", dmz),
      node("API", "SRV", dmz),
      node("DB", "SRV", dmz),
      node("DC", "SRV", dmz),
  };

  spec.actions = {
      // Spyware branch: web-shell foothold on WS, pivot into MAR, implant PS.
      attack("scan_dmz_services",
             {Conjunction{eq("At1.active", "true")},
              Conjunction{eq("At2.active", "true")}},
             {set("WS.recon.fingerprint", "iis6")}),
      attack("exploit_ws_webshell",
             one({eq("WS.recon.fingerprint", "iis6"),
                  eq("WS.service.vulnerable", "true")}),
             {set("WS.webshell.installed", "true"),
              set("WS.logs.suspicious_upload", "true")}),
      attack("establish_c2_ws", one({eq("WS.webshell.installed", "true")}),
             {set("WS.c2.beacon", "active")}),
      attack("scan_internal_network", one({eq("WS.c2.beacon", "active")}),
             {set("WS.recon.internal", "mapped")}),
      attack("harvest_ws_credentials",
             one({eq("WS.webshell.installed", "true"),
                  eq("WS.recon.internal", "mapped")}),
             {set("WS.creds.svc_marketing", "found"),
              set("WS.logs.config_read", "true")}),
      attack("lateral_move_ws_to_e3",
             one({eq("WS.c2.beacon", "active"),
                  eq("WS.creds.svc_marketing", "found")}),
             {set("E3.compromised_by.red", "true"),
              set("E3.session.red", "active")}),
      attack("escalate_privileges_e3", one({eq("E3.session.red", "active")}),
             {set("E3.privilege.red", "system")}),
      attack("install_spyware_ps",
             one({eq("E3.privilege.red", "system"), eq("PS.active", "true")}),
             {set("PS.spyware.installed", "true"),
              set("PS.compromised_by.red", "true")}),

      // Exfiltration branch: phished VPN access, domain credentials via E1,
      // collection and exfiltration on DB.
      attack("phish_employee_credentials", one({eq("ES.active", "true")}),
             {set("VPN.creds.employee", "phished"),
              set("ES.logs.phishing", "true")}),
      attack("vpn_login_employee",
             one({eq("VPN.creds.employee", "phished"),
                  eq("VPN.service.exposed", "true")}),
             {set("VPN.session.red", "active"),
              set("VPN.logs.unusual_login", "true")}),
      attack("lateral_move_vpn_to_e1", one({eq("VPN.session.red", "active")}),
             {set("E1.compromised_by.red", "true"),
              set("E1.session.red", "active")}),
      attack("dump_domain_credentials_e1",
             one({eq("E1.session.red", "active"), eq("DC.active", "true")}),
             {set("E1.creds.domain_admin", "dumped"),
              set("DC.logs.credential_query", "true")}),
      attack("lateral_move_e1_to_db",
             one({eq("E1.creds.domain_admin", "dumped"),
                  eq("E1.session.red", "active")}),
             {set("DB.compromised_by.red", "true"),
              set("DB.session.red", "active"),
              set("DB.logs.remote_login", "true")}),
      attack("escalate_db_privileges", one({eq("DB.session.red", "active")}),
             {set("DB.privilege.red", "dba"),
              set("DB.commands.whoami", "executed")}),
      attack("stage_db_data", one({eq("DB.privilege.red", "dba")}),
             {set("DB.data.staged", "true"),
              set("DB.commands.dump", "executed")}),
      attack("exfiltrate_db_data",
             one({eq("DB.data.staged", "true"), eq("DB.session.red", "active")}),
             {set("DB.data.exfiltrated", "true"),
              set("DB.logs.large_transfer", "true")}),

      // Side paths that never reach the goal: FTP mirroring, webmail
      // bruteforce, the accounting subnet, the tablet, the API server.
      attack("scan_ftp_banner",
             {Conjunction{eq("At1.active", "true")},
              Conjunction{eq("At2.active", "true")}},
             {set("FTP.recon.banner", "vsftpd")}),
      attack("ftp_anonymous_login",
             one({eq("FTP.recon.banner", "vsftpd"),
                  eq("FTP.service.anonymous", "enabled")}),
             {set("FTP.session.red", "active"),
              set("FTP.logs.anonymous_login", "true")}),
      attack("mirror_ftp_files", one({eq("FTP.session.red", "active")}),
             {set("FTP.data.mirrored", "true")}),
      attack("bruteforce_webmail", one({eq("ES.active", "true")}),
             {set("ES.logs.bruteforce", "true")}),
      attack("scan_acc_subnet", one({eq("VPN.session.red", "active")}),
             {set("E2.recon.services", "mapped"),
              set("CTO.recon.services", "mapped")}),
      attack("lateral_move_vpn_to_e2",
             one({eq("VPN.session.red", "active"),
                  eq("E2.recon.services", "mapped")}),
             {set("E2.compromised_by.red", "true"),
              set("E2.session.red", "active")}),
      attack("search_e2_documents", one({eq("E2.session.red", "active")}),
             {set("E2.data.browsed", "true")}),
      attack("lateral_move_ws_to_tab",
             one({eq("WS.c2.beacon", "active"),
                  eq("WS.creds.svc_marketing", "found")}),
             {set("TAB.compromised_by.red", "true"),
              set("TAB.session.red", "active")}),
      attack("probe_api_endpoints", one({eq("WS.recon.internal", "mapped")}),
             {set("API.recon.endpoints", "mapped"), set("API.logs.scan", "true")}),
      attack("exploit_api_debug", one({eq("API.recon.endpoints", "mapped")}),
             {set("API.session.red", "active"),
              set("API.logs.debug_access", "true")}),

      // Defender countermeasures. Once their log trigger exists they fire
      // every cycle, so attacker artifacts on WS/DB never survive a turn.
      defend("ws_quarantine_webshell", "defender1",
             one({eq("WS.logs.suspicious_upload", "true")}),
             {del("WS.service.vulnerable"), del("WS.webshell.installed"),
              del("WS.c2.beacon"), set("WS.alert.webshell", "handled")}),
      defend("ws_rotate_credentials", "defender1",
             one({eq("WS.logs.config_read", "true")}),
             {del("WS.creds.svc_marketing"),
              set("WS.alert.credentials", "rotated")}),
      defend("db_privileged_account_management", "defender2",
             one({eq("DB.commands.whoami", "executed")}),
             {del("DB.session.red"), del("DB.privilege.red"),
              del("DB.data.staged"), del("E1.creds.domain_admin"),
              set("DB.alert.pam", "active")}),
      defend("db_restrict_remote_sessions", "defender2",
             one({eq("DB.logs.remote_login", "true")}),
             {del("DB.session.red"), set("DB.alert.sessions", "restricted")}),
  };

  AgentSpec attacker1;
  attacker1.id = "attacker1";
  attacker1.team = Team::Attacker;
  attacker1.home_node = "At1";
  for (const char* p :
       {"At1.*", "WS.recon.*", "WS.webshell.*", "WS.c2.*", "WS.creds.*",
        "E3.session.*", "E3.privilege.*", "PS.spyware.*"}) {
    attacker1.observe.push_back(ObservePattern::parse(p));
  }
  attacker1.behavior = priority_tree(
      {
          when(present("PS.spyware.installed"), "pass"),
          when(present("E3.privilege.red"), "install_spyware_ps"),
          when(present("E3.session.red"), "escalate_privileges_e3"),
          when(present("WS.creds.svc_marketing"), "lateral_move_ws_to_e3"),
          when(present("WS.recon.internal"), "harvest_ws_credentials"),
          when(present("WS.c2.beacon"), "scan_internal_network"),
          when(present("WS.webshell.installed"), "establish_c2_ws"),
          when(present("WS.recon.fingerprint"), "exploit_ws_webshell"),
      },
      "scan_dmz_services");

  AgentSpec attacker2;
  attacker2.id = "attacker2";
  attacker2.team = Team::Attacker;
  attacker2.home_node = "At2";
  for (const char* p :
       {"At2.*", "VPN.creds.*", "VPN.session.*", "E1.session.*", "E1.creds.*",
        "DB.session.*", "DB.privilege.*", "DB.data.*"}) {
    attacker2.observe.push_back(ObservePattern::parse(p));
  }
  attacker2.behavior = priority_tree(
      {
          when(present("DB.data.exfiltrated"), "pass"),
          when(present("DB.data.staged"), "exfiltrate_db_data"),
          when(present("DB.privilege.red"), "stage_db_data"),
          when(present("DB.session.red"), "escalate_db_privileges"),
          when(present("E1.creds.domain_admin"), "lateral_move_e1_to_db"),
          when(present("E1.session.red"), "dump_domain_credentials_e1"),
          when(present("VPN.session.red"), "lateral_move_vpn_to_e1"),
          when(present("VPN.creds.employee"), "vpn_login_employee"),
      },
      "phish_employee_credentials");

  AgentSpec defender1;
  defender1.id = "defender1";
  defender1.team = Team::Defender;
  defender1.home_node = "WS";
  defender1.observe.push_back(ObservePattern::parse("WS.*"));
  defender1.behavior = priority_tree(
      {
          when(present("WS.logs.suspicious_upload"), "ws_quarantine_webshell"),
          when(present("WS.logs.config_read"), "ws_rotate_credentials"),
      },
      "pass");

  AgentSpec defender2;
  defender2.id = "defender2";
  defender2.team = Team::Defender;
  defender2.home_node = "DB";
  defender2.observe.push_back(ObservePattern::parse("DB.*"));
  defender2.behavior = priority_tree(
      {
          when(present("DB.commands.whoami"), "db_privileged_account_management"),
          when(present("DB.logs.remote_login"), "db_restrict_remote_sessions"),
      },
      "pass");

  spec.agents = {std::move(attacker1), std::move(attacker2),
                 std::move(defender1), std::move(defender2)};

  spec.attacker_goal = one({eq("DB.data.exfiltrated", "true"),
                            eq("PS.spyware.installed", "true")});

  spec.metrics = {"attacker_goal_progress", "active_node_count",
                  "lateral_move_count", "compromised_node_count"};
  // Attacker: zero-sum on goal progress, a slight pull along lateral moves,
  // and a per-cycle deficit until the full goal holds, so faster completion
  // means higher return. Defender: mirrored goal term plus a small bonus per
  // active node.
  spec.eval.weights[0] = {1.0, 0.0, 0.1, 0.0};
  spec.eval.weights[1] = {-1.0, 0.05, 0.0, 0.0};
  spec.eval.bias = {-2.0, 0.0};

  derive_action_ids(spec);
  return spec;
}

ScenarioSpec build_gallium_marl() {
  ScenarioSpec spec = build_gallium();
  spec.name = "gallium_marl";
  for (AgentSpec& agent : spec.agents) {
    if (agent.team == Team::Attacker) agent.behavior = QLearningConfig{};
  }
  return spec;
}

ScenarioSpec build_toy() {
  ScenarioSpec spec;
  spec.name = "toy";
  spec.max_cycles = 6;
  spec.nodes = {node("N1", "lab", "N2"), node("N2", "lab", "N1")};
  spec.actions = {
      attack("probe_host", one({eq("N1.active", "true")}),
             {set("N1.recon", "done")}),
      attack("exploit_service", one({eq("N1.recon", "done")}),
             {set("N2.session", "open"),
              set("N2.compromised_by.intruder", "true")}),
      attack("grab_flag", one({eq("N2.session", "open")}),
             {set("N2.flag", "taken")}),
      attack("make_noise", one({eq("N1.active", "true")}),
             {set("N1.noise", "made")}),
  };
  // build_toy reuses attack(): rewrite the allowed-agent lists for the single
  // toy intruder.
  for (ActionSpec& action : spec.actions) action.agents = {"intruder"};

  AgentSpec intruder;
  intruder.id = "intruder";
  intruder.team = Team::Attacker;
  intruder.home_node = "N1";
  intruder.observe.push_back(ObservePattern::parse("N1.*"));
  intruder.observe.push_back(ObservePattern::parse("N2.*"));
  intruder.behavior = RandomConfig{};
  spec.agents = {std::move(intruder)};

  spec.attacker_goal = one({eq("N2.flag", "taken")});
  spec.metrics = {"attacker_goal_progress", "active_node_count"};
  spec.eval.weights[0] = {1.0, 0.0};
  spec.eval.weights[1] = {-1.0, 0.0};
  spec.eval.bias = {0.0, 0.0};

  derive_action_ids(spec);
  return spec;
}

}  // namespace mcas
