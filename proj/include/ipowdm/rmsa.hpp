#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ipowdm/topology.hpp"
#include "ipowdm/traffic.hpp"
#include "ipowdm/transceiver.hpp"

namespace ipowdm {

enum class Architecture { OpIP, TrIP, TrZR, TrIPandZR };

inline constexpr Architecture kAllArchitectures[] = {
    Architecture::OpIP, Architecture::TrIP, Architecture::TrZR,
    Architecture::TrIPandZR};

std::string_view to_string(Architecture a);
Architecture parse_architecture(std::string_view s);

struct ArchitectureConfig {
  Architecture name = Architecture::OpIP;
  bool optical_bypass = false;
  // false: only end-to-end grooming (lightpath endpoints == demand endpoints).
  bool intermediate_ip_grooming = true;
  bool ip_regeneration = true;
  bool b2b_zr_regeneration = false;

  static ArchitectureConfig of(Architecture a);
  // TrZR picks the fewest channels; every other architecture the highest rate.
  bool min_channel_policy() const { return name == Architecture::TrZR; }
  bool operator==(const ArchitectureConfig&) const = default;
};

enum class DemandOrder { RateDesc, InputOrder };

struct PlannerConfig {
  int k = 3;
  // Multiplier on physical length for auxiliary edges over existing
  // lightpaths with enough residual capacity.
  double grooming_weight_factor = 0.01;
  DemandOrder demand_order = DemandOrder::RateDesc;
  // A new lightpath costs length_km + cheapest_pair_cost * cost_scale_km.
  // The default only breaks ties toward fewer new lightpaths; large values
  // make the lightpath count dominate physical length.
  double cost_scale_km = 1.0;
  // Max-rate architectures may use a lower-rate mode to cross a span without
  // regeneration, and cut sub-flows at the rate that reaches the shortest
  // route. false: every lightpath runs at the rate its links sustain,
  // regenerating in routers, and sub-flows are cut at the catalog maximum.
  bool rate_downgrade = true;

  void validate() const;
};

enum class Attachment { RouterPort, B2B };
std::string_view to_string(Attachment a);

struct Segment {
  std::vector<NodeIndex> nodes;
  int channel = -1;
  double length_km = 0.0;

  bool operator==(const Segment&) const = default;
};

struct Carried {
  int demand_id = 0;
  int rate_gbps = 0;

  auto operator<=>(const Carried&) const = default;
};

// One optical channel between two OEO terminations. Interior b2b regenerators
// split it into transparent segments; IP regeneration instead ends the
// lightpath at a router and links it to the next one via chain_prev/next.
struct Lightpath {
  int id = -1;
  std::vector<NodeIndex> route;
  TransceiverMode mode;
  std::vector<Segment> segments;
  RegenPlan regen_plan;  // b2b regenerators, positions within route
  Attachment src_attachment = Attachment::RouterPort;
  Attachment dst_attachment = Attachment::RouterPort;
  std::vector<Carried> carried;
  int chain_prev = -1;
  int chain_next = -1;

  NodeIndex src() const { return route.front(); }
  NodeIndex dst() const { return route.back(); }
  int carried_gbps() const;
  int residual_gbps() const { return mode.rate_gbps - carried_gbps(); }
  double length_km() const;
  std::vector<NodeIndex> regen_nodes() const;
  // Pluggables: one per end, two per b2b regenerator.
  int module_count() const {
    return 2 + 2 * static_cast<int>(regen_plan.regen_count());
  }
};

struct SubflowRoute {
  int rate_gbps = 0;
  std::vector<int> lightpaths;  // in traversal order
};

struct ProvisioningRecord {
  int demand_id = -1;
  Demand demand;
  std::vector<SubflowRoute> subflows;
  std::vector<int> new_lightpaths;
};

enum class BlockReason { NoSpectrum, NoFeasibleMode };
std::string_view to_string(BlockReason r);

class Blocked : public std::runtime_error {
 public:
  Blocked(int demand_id, BlockReason reason, const std::string& what)
      : std::runtime_error(what), demand_id_(demand_id), reason_(reason) {}
  int demand_id() const { return demand_id_; }
  BlockReason reason() const { return reason_; }

 private:
  int demand_id_;
  BlockReason reason_;
};

class NoSpectrum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NetworkState {
 public:
  // The topology must outlive the state.
  NetworkState(const Topology& topology, ArchitectureConfig arch);

  const Topology& topology() const { return *topology_; }
  const ArchitectureConfig& architecture() const { return arch_; }
  const std::vector<Lightpath>& lightpaths() const { return lightpaths_; }
  const Lightpath& lightpath(int id) const { return lightpaths_.at(id); }
  const std::vector<ProvisioningRecord>& records() const { return records_; }

  int channel_count() const { return topology_->grid().channel_count; }
  // Lightpath id holding (fiber, channel), or -1.
  int channel_owner(int fiber, int channel) const;

  // Lowest channel free on every fiber of a transparent node sequence.
  std::optional<int> first_fit(std::span<const NodeIndex> nodes) const;
  // Sequential first-fit over several segments without claiming anything;
  // nullopt if any segment finds no channel.
  std::optional<std::vector<int>> first_fit_all(
      std::span<const std::vector<NodeIndex>> segments) const;
  void claim(std::span<const NodeIndex> nodes, int channel, int owner);

  // Takes ownership of lp, assigns its id and claims its segment channels.
  // Throws std::logic_error on a channel clash.
  int add_lightpath(Lightpath lp);
  void groom(int lightpath_id, Carried c);
  void set_attachment(int lightpath_id, bool at_src, Attachment a);
  void link_chain(int upstream_id, int downstream_id);
  void add_record(ProvisioningRecord r) { records_.push_back(std::move(r)); }

  // For TrIPandZR: converts IP-regeneration junctions that carry exactly the
  // same traffic in and out to b2b pairs. No-op for other architectures.
  void finalize();

  // Invariant violations; empty when the state is consistent.
  std::vector<std::string> audit() const;

 private:
  const Topology* topology_;
  ArchitectureConfig arch_;
  std::vector<Lightpath> lightpaths_;
  std::vector<int> occupancy_;  // fiber * channel_count + channel -> owner
  std::vector<ProvisioningRecord> records_;
};

// Lowest common free channel on the segment; claims it for owner.
int assign_spectrum_first_fit(NetworkState& state,
                              std::span<const NodeIndex> segment, int owner);

enum class AuxEdgeKind { Groom, NewLightpath };

struct AuxEdge {
  NodeIndex from = 0;
  NodeIndex to = 0;
  double weight = 0.0;
  AuxEdgeKind kind = AuxEdgeKind::Groom;
  int lightpath_id = -1;              // Groom
  std::vector<NodeIndex> route;       // NewLightpath
  std::vector<TransceiverMode> modes; // NewLightpath, one per parallel channel
};

struct AuxGraph {
  std::size_t node_count = 0;
  std::vector<AuxEdge> edges;
  // Why candidate edges were dropped; used to label blocking.
  int rejected_for_spectrum = 0;
  int rejected_for_mode = 0;
};

class Planner {
 public:
  // Precomputes k shortest paths for every ordered node pair.
  Planner(const Topology& topology, ArchitectureConfig arch,
          PlannerConfig cfg = {},
          const ModeCatalog& catalog = ModeCatalog::standard());

  const PlannerConfig& config() const { return cfg_; }
  const ArchitectureConfig& architecture() const { return arch_; }
  const std::vector<Path>& paths(NodeIndex s, NodeIndex d) const;
  double new_lightpath_penalty() const;

  // Auxiliary graph for carrying d.rate_gbps from d.src to d.dst as one flow.
  AuxGraph build_auxiliary_graph(const NetworkState& state,
                                 const Demand& d) const;

  // Provisions the whole demand or throws Blocked leaving state untouched.
  ProvisioningRecord route_demand(NetworkState& state, const Demand& d,
                                  int demand_id) const;

  // Sub-flow sizes for the max-rate architectures. Opaque: chunks of the
  // highest rate every link of the shortest route sustains. Transparent: chunks of the highest rate that
  // reaches across the shortest route without regeneration.
  std::vector<int> split_subflows(const Demand& d) const;

 private:
  void route_subflow(NetworkState& state, const Demand& d, int demand_id,
                     int rate, ProvisioningRecord& record) const;
  void route_bundle(NetworkState& state, const Demand& d, int demand_id,
                    ProvisioningRecord& record) const;
  std::optional<std::vector<const AuxEdge*>> shortest_aux_path(
      const AuxGraph& g, NodeIndex s, NodeIndex d) const;

  const Topology* topology_;
  ArchitectureConfig arch_;
  PlannerConfig cfg_;
  const ModeCatalog* catalog_;
  std::vector<std::vector<Path>> paths_;  // s * n + d
};

struct BlockedDemand {
  int demand_id = -1;
  Demand demand;
  BlockReason reason = BlockReason::NoSpectrum;
};

struct ProvisioningResult {
  NetworkState state;
  std::vector<BlockedDemand> blocked;
};

// Demands are processed in cfg.demand_order; blocking is recorded, not thrown.
ProvisioningResult provision_all(
    const Topology& t, const TrafficMatrix& matrix, Architecture arch,
    const PlannerConfig& cfg = {},
    const ModeCatalog& catalog = ModeCatalog::standard());

std::vector<int> demand_processing_order(const TrafficMatrix& matrix,
                                         DemandOrder order);

std::string serialize_provisioning(const ProvisioningResult& result);

}  // namespace ipowdm
