#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "ipowdm/dimensioning.hpp"
#include "ipowdm/experiment.hpp"
#include "ipowdm/rmsa.hpp"
#include "json.hpp"

using namespace ipowdm;

namespace {

struct Common {
  std::vector<std::string> topologies;
  std::vector<std::string> archs;
  std::vector<std::string> scenarios;
  std::uint64_t seed = 1;
  int runs = 10;
  int k = PlannerConfig{}.k;
  std::string out;
  std::string format = "csv";
  std::string plant;
  std::string catalog;
  std::string baseline = "OpIP";
  unsigned threads = 0;
  bool strict = false;
};

void emit(const Common& c, const std::string& file_name, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(c.out);
  const auto path = std::filesystem::path(c.out) / file_name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ExperimentError("cannot write " + path.string());
  f << text;
}

std::string ext(const Common& c) { return c.format == "json" ? ".json" : ".csv"; }

PlantModel plant_of(const Common& c) {
  return c.plant.empty() ? PlantModel{} : load_plant_model(c.plant);
}

const ModeCatalog& catalog_of(const Common& c) {
  static std::optional<ModeCatalog> loaded;
  if (c.catalog.empty()) return ModeCatalog::standard();
  if (!loaded) {
    std::ifstream in(c.catalog);
    if (!in) throw ExperimentError("cannot open catalog " + c.catalog);
    std::stringstream buf;
    buf << in.rdbuf();
    loaded = parse_catalog(buf.str());
  }
  return *loaded;
}

PlannerConfig planner_of(const Common& c) {
  PlannerConfig p;
  p.k = c.k;
  return p;
}

ProvisioningResult plan_one(const Common& c, const Topology& t) {
  const TrafficScenario s = resolve_scenario(c.scenarios.at(0));
  const TrafficMatrix m = generate_traffic(t, s, c.seed);
  ProvisioningResult r =
      provision_all(t, m, parse_architecture(c.archs.at(0)), planner_of(c), catalog_of(c));
  if (c.strict && !r.blocked.empty()) {
    throw ExperimentError(fmt::format("{} demand(s) blocked", r.blocked.size()));
  }
  return r;
}

std::string lightpaths_csv(const ProvisioningResult& r) {
  const Topology& t = r.state.topology();
  std::string out =
      "id,src,dst,route,module,modulation,rate_gbps,carried_gbps,channels,regens,"
      "src_attachment,dst_attachment\n";
  for (const Lightpath& lp : r.state.lightpaths()) {
    std::string route, channels, regens;
    for (std::size_t i = 0; i < lp.route.size(); ++i) {
      route += (i ? "-" : "") + t.node_name(lp.route[i]);
    }
    for (std::size_t i = 0; i < lp.segments.size(); ++i) {
      channels += (i ? "|" : "") + std::to_string(lp.segments[i].channel);
    }
    const auto nodes = lp.regen_nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      regens += (i ? "|" : "") + t.node_name(nodes[i]);
    }
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", lp.id, t.node_name(lp.src()),
                       t.node_name(lp.dst()), route, to_string(lp.mode.module),
                       to_string(lp.mode.modulation), lp.mode.rate_gbps, lp.carried_gbps(),
                       channels, regens, to_string(lp.src_attachment),
                       to_string(lp.dst_attachment));
  }
  return out;
}

int cmd_gen_traffic(const Common& c) {
  const Topology t = resolve_topology(c.topologies.at(0));
  const TrafficScenario s = resolve_scenario(c.scenarios.at(0));
  const TrafficMatrix m = generate_traffic(t, s, c.seed);
  emit(c, "traffic" + ext(c), c.format == "json" ? traffic_to_json(t, m) : traffic_to_csv(t, m));
  return 0;
}

int cmd_plan(const Common& c) {
  const Topology t = resolve_topology(c.topologies.at(0));
  const ProvisioningResult r = plan_one(c, t);
  emit(c, "plan" + ext(c), c.format == "json" ? serialize_provisioning(r) : lightpaths_csv(r));
  return r.state.audit().empty() ? 0 : 1;
}

int cmd_power(const Common& c) {
  const Topology t = resolve_topology(c.topologies.at(0));
  const ProvisioningResult r = plan_one(c, t);
  const PlantModel plant = plant_of(c);
  const NetworkPower p = network_power(r.state, plant.power, plant.dimensioning);
  if (c.format == "json") {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t v = 0; v < p.nodes.size(); ++v) {
      const NodeEquipment& e = p.equipment[v];
      nodes.push_back({{"node", t.node_name(static_cast<NodeIndex>(v))},
                       {"router_ports", e.router_ports},
                       {"plugged_zr", e.plugged_zr},
                       {"plugged_zrplus", e.plugged_zrplus},
                       {"b2b_zr", e.b2b_zr},
                       {"b2b_zrplus", e.b2b_zrplus},
                       {"awg", e.awg},
                       {"iroadm", e.iroadm},
                       {"oa", e.oa},
                       {"adb", e.adb},
                       {"monitoring_units", e.monitoring_units},
                       {"shelves", e.shelves},
                       {"power_zr", p.nodes[v].zr_zrplus},
                       {"power_ip", p.nodes[v].ip_router},
                       {"power_optical", p.nodes[v].optical},
                       {"power_total", p.nodes[v].total}});
    }
    nlohmann::json doc{{"nodes", nodes},
                       {"total",
                        {{"power_zr", p.total.zr_zrplus},
                         {"power_ip", p.total.ip_router},
                         {"power_optical", p.total.optical},
                         {"power_total", p.total.total}}}};
    emit(c, "power.json", doc.dump(2) + "\n");
  } else {
    emit(c, "power.csv", equipment_to_csv(t, p));
  }
  return 0;
}

ExperimentConfig experiment_of(const Common& c) {
  ExperimentConfig cfg;
  for (const auto& t : c.topologies) cfg.topologies.push_back(resolve_topology(t));
  if (cfg.topologies.empty()) {
    cfg.topologies = {resolve_topology("J14"), resolve_topology("G17")};
  }
  if (!c.archs.empty()) {
    cfg.architectures.clear();
    for (const auto& a : c.archs) cfg.architectures.push_back(parse_architecture(a));
  }
  for (const auto& s : c.scenarios) cfg.scenarios.push_back(resolve_scenario(s));
  if (cfg.scenarios.empty()) {
    for (const auto& n : TrafficScenario::builtin_names()) {
      cfg.scenarios.push_back(TrafficScenario::builtin(n));
    }
  }
  cfg.first_seed = c.seed;
  cfg.runs = c.runs;
  cfg.planner = planner_of(c);
  cfg.plant = plant_of(c);
  cfg.catalog = &catalog_of(c);
  cfg.threads = c.threads;
  cfg.strict = c.strict;
  return cfg;
}

int cmd_experiment(const Common& c) {
  const ExperimentResult r = run_experiment(experiment_of(c));
  if (c.format == "json") {
    emit(c, "experiment.json", experiment_to_json(r));
  } else if (c.out.empty()) {
    std::cout << runs_to_csv(r.runs);
  } else {
    emit(c, "runs.csv", runs_to_csv(r.runs));
    emit(c, "cells.csv", cells_to_csv(r.cells));
  }
  return 0;
}

int cmd_compare(const Common& c) {
  ExperimentConfig cfg = experiment_of(c);
  const Architecture base = parse_architecture(c.baseline);
  if (std::find(cfg.architectures.begin(), cfg.architectures.end(), base) ==
      cfg.architectures.end()) {
    cfg.architectures.insert(cfg.architectures.begin(), base);
  }
  const ExperimentResult r = run_experiment(cfg);
  const auto rows = compare(r.cells, base);
  emit(c, "compare" + ext(c), c.format == "json" ? savings_to_json(rows) : savings_to_csv(rows));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IP-over-WDM planning simulator"};
  app.require_subcommand(1);
  Common c;

  auto add_topology = [&](CLI::App* s, bool many) {
    auto* o = s->add_option("--topology", c.topologies, "topology file or J14/G17");
    if (!many) o->required()->expected(1);
  };
  auto add_scenario = [&](CLI::App* s, bool many) {
    auto* o = s->add_option("--scenario", c.scenarios, "scenario file or TS1/TS2/TS3");
    if (!many) o->required()->expected(1);
  };
  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--out", c.out, "output directory (default stdout)");
  };

  auto* gen = app.add_subcommand("gen-traffic", "full-mesh traffic matrix");
  add_topology(gen, false);
  add_scenario(gen, false);
  gen->add_option("--seed", c.seed);
  add_format(gen);

  auto* plan = app.add_subcommand("plan", "provision one traffic matrix");
  auto* power = app.add_subcommand("power", "per-node equipment and power");
  for (auto* s : {plan, power}) {
    add_topology(s, false);
    add_scenario(s, false);
    s->add_option("--arch", c.archs, "OpIP, TrIP, TrZR or TrIPandZR")->required()->expected(1);
    s->add_option("--seed", c.seed);
    s->add_option("--k", c.k, "candidate paths per pair")->check(CLI::PositiveNumber);
    s->add_option("--catalog", c.catalog, "transceiver mode catalog");
    s->add_flag("--strict", c.strict, "fail if any demand is blocked");
    add_format(s);
  }
  power->add_option("--plant", c.plant, "power table and dimensioning constants");

  auto* exp = app.add_subcommand("experiment", "batch runs with per-cell averages");
  auto* cmp = app.add_subcommand("compare", "savings against a baseline architecture");
  for (auto* s : {exp, cmp}) {
    add_topology(s, true);
    add_scenario(s, true);
    s->add_option("--arch", c.archs, "architectures (default all)");
    s->add_option("--seed", c.seed, "first seed");
    s->add_option("--runs", c.runs, "seeds per cell")->check(CLI::PositiveNumber);
    s->add_option("--k", c.k, "candidate paths per pair")->check(CLI::PositiveNumber);
    s->add_option("--threads", c.threads, "worker threads (default all cores)");
    s->add_option("--plant", c.plant, "power table and dimensioning constants");
    s->add_option("--catalog", c.catalog, "transceiver mode catalog");
    s->add_flag("--strict", c.strict, "fail on any blocked demand");
    add_format(s);
  }
  cmp->add_option("--baseline", c.baseline, "baseline architecture");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen_traffic(c);
    if (*plan) return cmd_plan(c);
    if (*power) return cmd_power(c);
    if (*exp) return cmd_experiment(c);
    if (*cmp) return cmd_compare(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
