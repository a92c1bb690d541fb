#include "ipowdm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "json.hpp"

namespace ipowdm {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

}  // namespace

std::string data_dir() {
  if (const char* env = std::getenv("IPOWDM_DATA_DIR"); env && *env) return env;
  return IPOWDM_DATA_DIR;
}

Topology resolve_topology(const std::string& ref) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(ref)) return load_topology(ref);
  const fs::path shipped = fs::path(data_dir()) / "topologies" / (lower(ref) + ".json");
  if (fs::is_regular_file(shipped)) return load_topology(shipped.string());
  throw ExperimentError("unknown topology " + ref);
}

TrafficScenario resolve_scenario(const std::string& ref) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(ref)) return load_scenario(ref);
  const auto names = TrafficScenario::builtin_names();
  if (std::find(names.begin(), names.end(), upper(ref)) != names.end()) {
    return TrafficScenario::builtin(upper(ref));
  }
  throw ExperimentError("unknown scenario " + ref);
}

RunResult evaluate_run(const Topology& t, Architecture arch, const TrafficScenario& s,
                       std::uint64_t seed, const PlannerConfig& planner,
                       const PlantModel& plant, const ModeCatalog& catalog) {
  const TrafficMatrix m = generate_traffic(t, s, seed);
  const ProvisioningResult p = provision_all(t, m, arch, planner, catalog);
  RunResult r;
  r.key = {t.name(), arch, s.name, seed};
  r.issues = p.state.audit();
  r.cost = network_cost(p.state);
  r.power = network_power(p.state, plant.power, plant.dimensioning).total;
  r.demands = static_cast<int>(m.demands.size());
  r.blocked = static_cast<int>(p.blocked.size());
  return r;
}

void ExperimentConfig::validate() const {
  if (topologies.empty()) throw ExperimentError("experiment: no topologies");
  if (architectures.empty()) throw ExperimentError("experiment: no architectures");
  if (scenarios.empty()) throw ExperimentError("experiment: no scenarios");
  if (runs < 1) throw ExperimentError("experiment: runs must be >= 1");
  if (catalog == nullptr) throw ExperimentError("experiment: no mode catalog");
  planner.validate();
  plant.power.validate();
  plant.dimensioning.validate();
  for (const auto& s : scenarios) s.validate();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  struct Job {
    const Topology* topology;
    Architecture arch;
    const TrafficScenario* scenario;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const auto& t : cfg.topologies) {
    for (Architecture a : cfg.architectures) {
      for (const auto& s : cfg.scenarios) {
        for (int i = 0; i < cfg.runs; ++i) {
          jobs.push_back({&t, a, &s, cfg.first_seed + static_cast<std::uint64_t>(i)});
        }
      }
    }
  }

  ExperimentResult result;
  result.runs.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const Job& j = jobs[i];
        result.runs[i] = evaluate_run(*j.topology, j.arch, *j.scenario, j.seed, cfg.planner,
                                      cfg.plant, *cfg.catalog);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  if (cfg.strict) {
    for (const RunResult& r : result.runs) {
      const std::string where = fmt::format("{} {} {} seed {}", r.key.topology,
                                            to_string(r.key.arch), r.key.scenario, r.key.seed);
      if (r.blocked > 0) {
        throw ExperimentError(fmt::format("{}: {} blocked demand(s)", where, r.blocked));
      }
      if (!r.issues.empty()) throw ExperimentError(where + ": " + r.issues.front());
    }
  }
  result.cells = average_cells(result.runs);
  return result;
}

std::vector<CellAverage> average_cells(const std::vector<RunResult>& runs) {
  std::vector<CellAverage> cells;
  for (const RunResult& r : runs) {
    auto it = std::find_if(cells.begin(), cells.end(), [&](const CellAverage& c) {
      return c.topology == r.key.topology && c.arch == r.key.arch &&
             c.scenario == r.key.scenario;
    });
    if (it == cells.end()) {
      cells.push_back({r.key.topology, r.key.arch, r.key.scenario});
      it = std::prev(cells.end());
    }
    CellAverage& c = *it;
    ++c.runs;
    c.zr_count += r.cost.zr_count;
    c.zrplus_count += r.cost.zrplus_count;
    c.b2b_modules += r.cost.b2b_modules;
    c.router_ports += r.cost.router_ports;
    c.module_cost += r.cost.module_cost;
    c.power_zr += r.power.zr_zrplus;
    c.power_ip += r.power.ip_router;
    c.power_optical += r.power.optical;
    c.power_total += r.power.total;
    c.blocked += r.blocked;
  }
  for (CellAverage& c : cells) {
    const double n = c.runs;
    for (double* v : {&c.zr_count, &c.zrplus_count, &c.b2b_modules, &c.router_ports,
                      &c.module_cost, &c.power_zr, &c.power_ip, &c.power_optical,
                      &c.power_total, &c.blocked}) {
      *v /= n;
    }
  }
  return cells;
}

const CellAverage& find_cell(const std::vector<CellAverage>& cells, const std::string& topology,
                             Architecture arch, const std::string& scenario) {
  for (const CellAverage& c : cells) {
    if (c.topology == topology && c.arch == arch && c.scenario == scenario) return c;
  }
  throw ExperimentError(fmt::format("no cell {} {} {}", topology, to_string(arch), scenario));
}

double saving_percent(double baseline, double value) {
  if (baseline == 0.0) return 0.0;
  return 100.0 * (baseline - value) / baseline;
}

std::vector<Savings> compare(const std::vector<CellAverage>& cells, Architecture baseline) {
  std::vector<Savings> out;
  for (const CellAverage& c : cells) {
    if (c.arch == baseline) continue;
    const CellAverage& b = find_cell(cells, c.topology, baseline, c.scenario);
    out.push_back({c.topology, c.scenario, c.arch, baseline,
                   saving_percent(b.power_zr, c.power_zr),
                   saving_percent(b.power_ip, c.power_ip),
                   saving_percent(b.power_optical, c.power_optical),
                   saving_percent(b.power_total, c.power_total),
                   saving_percent(b.module_count(), c.module_count()),
                   saving_percent(b.module_cost, c.module_cost),
                   saving_percent(b.router_ports, c.router_ports)});
  }
  return out;
}

const char* const kRunCsvHeader =
    "topology,arch,scenario,seed,zr_count,zrplus_count,b2b_modules,router_ports,"
    "module_cost,power_zr,power_ip,power_optical,power_total,blocked";

std::string runs_to_csv(const std::vector<RunResult>& runs) {
  std::string out = std::string(kRunCsvHeader) + "\n";
  for (const RunResult& r : runs) {
    out += fmt::format("{},{},{},{},{},{},{},{},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{}\n",
                       r.key.topology, to_string(r.key.arch), r.key.scenario, r.key.seed,
                       r.cost.zr_count, r.cost.zrplus_count, r.cost.b2b_modules,
                       r.cost.router_ports, r.cost.module_cost, r.power.zr_zrplus,
                       r.power.ip_router, r.power.optical, r.power.total, r.blocked);
  }
  return out;
}

std::string cells_to_csv(const std::vector<CellAverage>& cells) {
  std::string out = std::string(kRunCsvHeader) + "\n";
  for (const CellAverage& c : cells) {
    out += fmt::format(
        "{},{},{},mean,{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f},{:.4f}\n",
        c.topology, to_string(c.arch), c.scenario, c.zr_count, c.zrplus_count, c.b2b_modules,
        c.router_ports, c.module_cost, c.power_zr, c.power_ip, c.power_optical, c.power_total,
        c.blocked);
  }
  return out;
}

std::string savings_to_csv(const std::vector<Savings>& rows) {
  std::string out =
      "topology,scenario,arch,baseline,power_zr,power_ip,power_optical,power_total,"
      "module_count,module_cost,router_ports\n";
  for (const Savings& s : rows) {
    out += fmt::format("{},{},{},{},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f},{:.2f}\n",
                       s.topology, s.scenario, to_string(s.arch), to_string(s.baseline),
                       s.power_zr, s.power_ip, s.power_optical, s.power_total, s.module_count,
                       s.module_cost, s.router_ports);
  }
  return out;
}

std::string experiment_to_json(const ExperimentResult& r) {
  using json = nlohmann::json;
  json runs = json::array();
  for (const RunResult& x : r.runs) {
    runs.push_back({{"topology", x.key.topology},
                    {"arch", to_string(x.key.arch)},
                    {"scenario", x.key.scenario},
                    {"seed", x.key.seed},
                    {"zr_count", x.cost.zr_count},
                    {"zrplus_count", x.cost.zrplus_count},
                    {"b2b_modules", x.cost.b2b_modules},
                    {"router_ports", x.cost.router_ports},
                    {"module_cost", x.cost.module_cost},
                    {"power_zr", x.power.zr_zrplus},
                    {"power_ip", x.power.ip_router},
                    {"power_optical", x.power.optical},
                    {"power_total", x.power.total},
                    {"blocked", x.blocked}});
  }
  json cells = json::array();
  for (const CellAverage& c : r.cells) {
    cells.push_back({{"topology", c.topology},
                     {"arch", to_string(c.arch)},
                     {"scenario", c.scenario},
                     {"runs", c.runs},
                     {"zr_count", c.zr_count},
                     {"zrplus_count", c.zrplus_count},
                     {"b2b_modules", c.b2b_modules},
                     {"router_ports", c.router_ports},
                     {"module_cost", c.module_cost},
                     {"power_zr", c.power_zr},
                     {"power_ip", c.power_ip},
                     {"power_optical", c.power_optical},
                     {"power_total", c.power_total},
                     {"blocked", c.blocked}});
  }
  json doc{{"runs", runs}, {"cells", cells}};
  return doc.dump(2) + "\n";
}

std::string savings_to_json(const std::vector<Savings>& rows) {
  using json = nlohmann::json;
  json out = json::array();
  for (const Savings& s : rows) {
    out.push_back({{"topology", s.topology},
                   {"scenario", s.scenario},
                   {"arch", to_string(s.arch)},
                   {"baseline", to_string(s.baseline)},
                   {"power_zr", s.power_zr},
                   {"power_ip", s.power_ip},
                   {"power_optical", s.power_optical},
                   {"power_total", s.power_total},
                   {"module_count", s.module_count},
                   {"module_cost", s.module_cost},
                   {"router_ports", s.router_ports}});
  }
  return out.dump(2) + "\n";
}

}  // namespace ipowdm
