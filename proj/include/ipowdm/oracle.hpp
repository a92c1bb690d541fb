#pragma once

// Brute-force reference solvers for small instances. Test use only.

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "ipowdm/rmsa.hpp"
#include "ipowdm/topology.hpp"
#include "ipowdm/traffic.hpp"
#include "ipowdm/transceiver.hpp"

namespace ipowdm::oracle {

class InstanceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every simple path from s to d, sorted by (length, node sequence).
std::vector<Path> simple_paths(const Topology& t, NodeIndex s, NodeIndex d);

// Fewest interior regenerators so that no transparent stretch exceeds
// reach_km, by trying every subset of interior positions in order of size.
// nullopt when a single link is longer than reach_km. At most 20 links.
std::optional<int> min_regens(std::span<const double> link_lengths_km, double reach_km);

// Lexicographic objective of a parallel-channel choice on a path:
// (channels, regenerators, power in micro-units, spare capacity).
struct ChannelChoiceCost {
  int channels = 0;
  int regens = 0;
  long long power_micro = 0;
  int spare_gbps = 0;

  auto operator<=>(const ChannelChoiceCost&) const = default;
};

// Cost of a given mode multiset, with regenerators counted by min_regens.
ChannelChoiceCost channel_choice_cost(std::span<const TransceiverMode> modes,
                                      int rate_gbps,
                                      std::span<const double> link_lengths_km);

// Best cost over every ordered tuple of catalog modes that carries rate_gbps
// and whose modes each cover the longest link. nullopt if none does.
std::optional<ChannelChoiceCost> best_channel_choice(
    int rate_gbps, std::span<const double> link_lengths_km,
    const ModeCatalog& catalog = ModeCatalog::standard());

struct ProvisionOptimum {
  bool feasible = false;
  double module_cost = 0.0;
  int router_ports = 0;
  int lightpaths = 0;
};

// Exact minimum (module cost, then router ports) over logical routes for
// every sub-flow, with traffic on each logical hop carried by the cheapest set
// of parallel lightpaths. Spectrum is not limited, and traffic between the
// same two lightpath endpoints may be shared freely across parallel
// lightpaths, so the result never exceeds what the planner can achieve.
//  - OpIP: logical hops are physical links.
//  - TrIP, TrIPandZR: logical hops join any two nodes; each lightpath is
//    transparent over the shortest route. Router ports are counted as for
//    TrIP, since b2b junctions do not change module cost.
//  - TrZR: one logical hop per demand; lightpaths may use any simple route
//    with back-to-back regenerators.
// Max-rate architectures cut demands into sub-flows as the planner does and
// route each sub-flow on its own; TrZR keeps each demand whole.
// Throws InstanceTooLarge beyond 5 nodes or 8 demands.
ProvisionOptimum min_cost_provision(const Topology& t, std::span<const Demand> demands,
                                    Architecture arch,
                                    const ModeCatalog& catalog = ModeCatalog::standard(),
                                    const PlannerConfig& planner = {});

}  // namespace ipowdm::oracle
