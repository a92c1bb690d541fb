#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ipowdm/topology.hpp"

namespace ipowdm {

inline constexpr std::array<int, 6> kRateClassesGbps{100, 200, 300, 400, 500, 600};

class TrafficError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Demand {
  NodeIndex src = 0;
  NodeIndex dst = 0;
  int rate_gbps = 0;

  bool operator==(const Demand&) const = default;
};

// Probability of each rate class, in kRateClassesGbps order.
struct TrafficScenario {
  std::string name;
  std::array<double, 6> weights{};

  // Throws TrafficError unless weights are >= 0 and sum to 1 within 1e-9.
  void validate() const;

  // TS1 (low rates dominate), TS2 (balanced), TS3 (high rates dominate).
  static TrafficScenario builtin(std::string_view name);
  static std::vector<std::string> builtin_names();
};

struct TrafficMatrix {
  std::vector<Demand> demands;
  std::uint64_t seed = 0;
  TrafficScenario scenario;
};

// Draws rate classes by inverse CDF from std::mt19937_64 outputs; the engine
// output sequence is fixed by the C++ standard, and the mapping
// u = (x >> 11) * 2^-53 is done here, so results do not depend on the
// standard library's distribution implementations.
class RateSampler {
 public:
  RateSampler(const TrafficScenario& scenario, std::uint64_t seed);
  int next();

 private:
  std::array<double, 6> cumulative_{};
  std::mt19937_64 engine_;
};

// One demand per ordered node pair (src-major, ascending node index), each
// rate drawn i.i.d. from the scenario.
TrafficMatrix generate_traffic(const Topology& t, const TrafficScenario& s,
                               std::uint64_t seed);

// {"name": "...", "weights": {"100": 0.3, ...}}; missing classes weigh 0.
TrafficScenario parse_scenario(std::string_view document);
TrafficScenario load_scenario(const std::string& path);
std::string serialize_scenario(const TrafficScenario& s);

// Header "src,dst,rate_gbps".
std::string traffic_to_csv(const Topology& t, const TrafficMatrix& m);
std::string traffic_to_json(const Topology& t, const TrafficMatrix& m);

int rate_class_index(int rate_gbps);

}  // namespace ipowdm
