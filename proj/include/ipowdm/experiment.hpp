#pragma once

#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

#include "ipowdm/dimensioning.hpp"
#include "ipowdm/rmsa.hpp"
#include "ipowdm/topology.hpp"
#include "ipowdm/traffic.hpp"
#include "ipowdm/transceiver.hpp"

namespace ipowdm {

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Directory holding topologies/, scenarios/ and the default plant model.
// IPOWDM_DATA_DIR in the environment overrides the build-time location.
std::string data_dir();

// A readable file path, or a shipped name (J14, G17, TS1..TS3).
Topology resolve_topology(const std::string& ref);
TrafficScenario resolve_scenario(const std::string& ref);

struct RunKey {
  std::string topology;
  Architecture arch = Architecture::OpIP;
  std::string scenario;
  std::uint64_t seed = 0;
};

struct RunResult {
  RunKey key;
  CostReport cost;
  PowerBreakdown power;
  int demands = 0;
  int blocked = 0;
  std::vector<std::string> issues;  // audit findings
};

// Provisions, audits, dimensions and evaluates one run.
RunResult evaluate_run(const Topology& t, Architecture arch, const TrafficScenario& s,
                       std::uint64_t seed, const PlannerConfig& planner = {},
                       const PlantModel& plant = {},
                       const ModeCatalog& catalog = ModeCatalog::standard());

struct CellAverage {
  std::string topology;
  Architecture arch = Architecture::OpIP;
  std::string scenario;
  int runs = 0;
  double zr_count = 0.0;
  double zrplus_count = 0.0;
  double b2b_modules = 0.0;
  double router_ports = 0.0;
  double module_cost = 0.0;
  double power_zr = 0.0;
  double power_ip = 0.0;
  double power_optical = 0.0;
  double power_total = 0.0;
  double blocked = 0.0;

  double module_count() const { return zr_count + zrplus_count; }
};

struct ExperimentConfig {
  std::vector<Topology> topologies;
  std::vector<Architecture> architectures{std::begin(kAllArchitectures),
                                          std::end(kAllArchitectures)};
  std::vector<TrafficScenario> scenarios;
  std::uint64_t first_seed = 1;  // run i uses first_seed + i
  int runs = 10;
  PlannerConfig planner;
  PlantModel plant;
  const ModeCatalog* catalog = &ModeCatalog::standard();
  unsigned threads = 0;  // 0: hardware concurrency
  // Strict: any blocked demand or audit finding fails the experiment.
  bool strict = true;

  void validate() const;
};

struct ExperimentResult {
  std::vector<RunResult> runs;    // topology, arch, scenario, seed order
  std::vector<CellAverage> cells; // same order without seed
};

// Throws ExperimentError in strict mode if any run blocked or failed audit.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::vector<CellAverage> average_cells(const std::vector<RunResult>& runs);

const CellAverage& find_cell(const std::vector<CellAverage>& cells,
                             const std::string& topology, Architecture arch,
                             const std::string& scenario);

// Percentage saved relative to the baseline cell: 100 * (base - x) / base.
struct Savings {
  std::string topology;
  std::string scenario;
  Architecture arch = Architecture::OpIP;
  Architecture baseline = Architecture::OpIP;
  double power_zr = 0.0;
  double power_ip = 0.0;
  double power_optical = 0.0;
  double power_total = 0.0;
  double module_count = 0.0;
  double module_cost = 0.0;
  double router_ports = 0.0;
};

double saving_percent(double baseline, double value);
std::vector<Savings> compare(const std::vector<CellAverage>& cells, Architecture baseline);

extern const char* const kRunCsvHeader;

std::string runs_to_csv(const std::vector<RunResult>& runs);
std::string cells_to_csv(const std::vector<CellAverage>& cells);
std::string savings_to_csv(const std::vector<Savings>& rows);
std::string experiment_to_json(const ExperimentResult& r);
std::string savings_to_json(const std::vector<Savings>& rows);

}  // namespace ipowdm
