#include "ipowdm/rmsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace ipowdm {

std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::OpIP: return "OpIP";
    case Architecture::TrIP: return "TrIP";
    case Architecture::TrZR: return "TrZR";
    case Architecture::TrIPandZR: return "TrIPandZR";
  }
  return "?";
}

Architecture parse_architecture(std::string_view s) {
  for (Architecture a : kAllArchitectures) {
    if (s == to_string(a)) return a;
  }
  if (s == "Op-IP") return Architecture::OpIP;
  if (s == "Tr-IP") return Architecture::TrIP;
  if (s == "Tr-ZR" || s == "Tr-NoIP") return Architecture::TrZR;
  if (s == "Tr-IP&ZR" || s == "TrIP&ZR") return Architecture::TrIPandZR;
  throw std::invalid_argument("unknown architecture " + std::string(s));
}

ArchitectureConfig ArchitectureConfig::of(Architecture a) {
  switch (a) {
    case Architecture::OpIP: return {a, false, true, true, false};
    case Architecture::TrIP: return {a, true, true, true, false};
    case Architecture::TrZR: return {a, true, false, false, true};
    case Architecture::TrIPandZR: return {a, true, true, true, true};
  }
  throw std::invalid_argument("unknown architecture");
}

std::string_view to_string(Attachment a) {
  return a == Attachment::RouterPort ? "router" : "b2b";
}

std::string_view to_string(BlockReason r) {
  return r == BlockReason::NoSpectrum ? "no_spectrum" : "no_feasible_mode";
}

void PlannerConfig::validate() const {
  if (k < 1) throw std::invalid_argument("planner: k must be >= 1");
  if (!(grooming_weight_factor > 0.0 && grooming_weight_factor <= 1.0)) {
    throw std::invalid_argument("planner: grooming weight factor must be in (0, 1]");
  }
  if (!(cost_scale_km >= 0.0)) {
    throw std::invalid_argument("planner: cost scale must be >= 0");
  }
}

int Lightpath::carried_gbps() const {
  int total = 0;
  for (const Carried& c : carried) total += c.rate_gbps;
  return total;
}

double Lightpath::length_km() const {
  double total = 0.0;
  for (const Segment& s : segments) total += s.length_km;
  return total;
}

std::vector<NodeIndex> Lightpath::regen_nodes() const {
  std::vector<NodeIndex> out;
  for (std::size_t pos : regen_plan.regen_positions) out.push_back(route.at(pos));
  return out;
}

// ---------------------------------------------------------------------------
// NetworkState

NetworkState::NetworkState(const Topology& topology, ArchitectureConfig arch)
    : topology_(&topology),
      arch_(arch),
      occupancy_(static_cast<std::size_t>(topology.fiber_count()) *
                     topology.grid().channel_count,
                 -1) {}

int NetworkState::channel_owner(int fiber, int channel) const {
  return occupancy_.at(static_cast<std::size_t>(fiber) * channel_count() + channel);
}

std::optional<int> NetworkState::first_fit(std::span<const NodeIndex> nodes) const {
  std::vector<int> fibers;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    fibers.push_back(topology_->fiber(nodes[i - 1], nodes[i]));
  }
  for (int ch = 0; ch < channel_count(); ++ch) {
    bool free = true;
    for (int f : fibers) {
      if (channel_owner(f, ch) != -1) {
        free = false;
        break;
      }
    }
    if (free) return ch;
  }
  return std::nullopt;
}

std::optional<std::vector<int>> NetworkState::first_fit_all(
    std::span<const std::vector<NodeIndex>> segments) const {
  std::set<std::pair<int, int>> pending;
  std::vector<int> channels;
  for (const auto& seg : segments) {
    std::vector<int> fibers;
    for (std::size_t i = 1; i < seg.size(); ++i) {
      fibers.push_back(topology_->fiber(seg[i - 1], seg[i]));
    }
    std::optional<int> found;
    for (int ch = 0; ch < channel_count() && !found; ++ch) {
      bool free = true;
      for (int f : fibers) {
        if (channel_owner(f, ch) != -1 || pending.count({f, ch})) {
          free = false;
          break;
        }
      }
      if (free) found = ch;
    }
    if (!found) return std::nullopt;
    for (int f : fibers) pending.insert({f, *found});
    channels.push_back(*found);
  }
  return channels;
}

void NetworkState::claim(std::span<const NodeIndex> nodes, int channel, int owner) {
  if (channel < 0 || channel >= channel_count()) {
    throw std::logic_error("channel index out of range");
  }
  std::vector<int> fibers;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    fibers.push_back(topology_->fiber(nodes[i - 1], nodes[i]));
  }
  for (int f : fibers) {
    if (channel_owner(f, channel) != -1) {
      throw std::logic_error("channel " + std::to_string(channel) +
                             " already taken on fiber " + std::to_string(f));
    }
  }
  for (int f : fibers) {
    occupancy_[static_cast<std::size_t>(f) * channel_count() + channel] = owner;
  }
}

int NetworkState::add_lightpath(Lightpath lp) {
  if (lp.route.size() < 2 || lp.segments.empty()) {
    throw std::logic_error("lightpath needs a route and at least one segment");
  }
  lp.id = static_cast<int>(lightpaths_.size());
  // Validate all segments before claiming so a clash leaves no residue.
  std::set<std::pair<int, int>> wanted;
  for (const Segment& s : lp.segments) {
    if (s.channel < 0 || s.channel >= channel_count()) {
      throw std::logic_error("segment channel out of range");
    }
    for (std::size_t i = 1; i < s.nodes.size(); ++i) {
      int f = topology_->fiber(s.nodes[i - 1], s.nodes[i]);
      if (channel_owner(f, s.channel) != -1 || !wanted.insert({f, s.channel}).second) {
        throw std::logic_error("channel clash on fiber " + std::to_string(f));
      }
    }
  }
  for (const Segment& s : lp.segments) claim(s.nodes, s.channel, lp.id);
  lightpaths_.push_back(std::move(lp));
  return lightpaths_.back().id;
}

void NetworkState::groom(int lightpath_id, Carried c) {
  Lightpath& lp = lightpaths_.at(lightpath_id);
  if (c.rate_gbps > lp.residual_gbps()) {
    throw std::logic_error("grooming exceeds lightpath residual");
  }
  lp.carried.push_back(c);
}

void NetworkState::set_attachment(int lightpath_id, bool at_src, Attachment a) {
  Lightpath& lp = lightpaths_.at(lightpath_id);
  (at_src ? lp.src_attachment : lp.dst_attachment) = a;
}

void NetworkState::link_chain(int upstream_id, int downstream_id) {
  Lightpath& up = lightpaths_.at(upstream_id);
  Lightpath& down = lightpaths_.at(downstream_id);
  if (up.dst() != down.src()) throw std::logic_error("chain lightpaths do not meet");
  up.chain_next = downstream_id;
  down.chain_prev = upstream_id;
}

void NetworkState::finalize() {
  if (arch_.name != Architecture::TrIPandZR) return;
  for (Lightpath& lp : lightpaths_) {
    if (lp.chain_next < 0) continue;
    Lightpath& next = lightpaths_[lp.chain_next];
    auto in = lp.carried;
    auto out = next.carried;
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    if (in == out) {
      lp.dst_attachment = Attachment::B2B;
      next.src_attachment = Attachment::B2B;
    }
  }
}

std::vector<std::string> NetworkState::audit() const {
  std::vector<std::string> issues;
  const Topology& t = *topology_;
  auto lp_name = [&](const Lightpath& lp) {
    return "lightpath " + std::to_string(lp.id) + " (" + format_path(t, lp.route) + ")";
  };

  std::vector<int> rebuilt(occupancy_.size(), -1);
  for (const Lightpath& lp : lightpaths_) {
    for (const Segment& s : lp.segments) {
      if (s.channel < 0 || s.channel >= channel_count()) {
        issues.push_back(lp_name(lp) + ": channel out of range");
        continue;
      }
      for (std::size_t i = 1; i < s.nodes.size(); ++i) {
        auto link = t.link_between(s.nodes[i - 1], s.nodes[i]);
        if (!link) {
          issues.push_back(lp_name(lp) + ": segment step is not a link");
          continue;
        }
        int f = t.fiber(s.nodes[i - 1], s.nodes[i]);
        int& slot = rebuilt[static_cast<std::size_t>(f) * channel_count() + s.channel];
        if (slot != -1) {
          issues.push_back(lp_name(lp) + ": channel " + std::to_string(s.channel) +
                           " clashes with lightpath " + std::to_string(slot) +
                           " on fiber " + std::to_string(f));
        }
        slot = lp.id;
      }
    }
  }
  if (rebuilt != occupancy_) issues.push_back("occupancy differs from lightpath claims");

  std::map<int, Demand> demands;
  for (const ProvisioningRecord& r : records_) demands[r.demand_id] = r.demand;

  for (const Lightpath& lp : lightpaths_) {
    if (lp.residual_gbps() < 0) issues.push_back(lp_name(lp) + ": negative residual");
    if (lp.carried.empty()) issues.push_back(lp_name(lp) + ": carries nothing");
    std::vector<NodeIndex> joined;
    for (const Segment& s : lp.segments) {
      if (s.nodes.size() < 2) {
        issues.push_back(lp_name(lp) + ": degenerate segment");
        continue;
      }
      if (!joined.empty() && joined.back() != s.nodes.front()) {
        issues.push_back(lp_name(lp) + ": segments are not contiguous");
      }
      joined.insert(joined.end(), s.nodes.begin() + (joined.empty() ? 0 : 1), s.nodes.end());
      const double len = path_length_km(t, s.nodes);
      if (std::abs(len - s.length_km) > 1e-6) {
        issues.push_back(lp_name(lp) + ": segment length mismatch");
      }
      if (len > lp.mode.reach_km) {
        issues.push_back(lp_name(lp) + ": segment exceeds mode reach");
      }
    }
    if (joined != lp.route) issues.push_back(lp_name(lp) + ": segments do not cover route");
    if (lp.segments.size() != lp.regen_plan.regen_count() + 1) {
      issues.push_back(lp_name(lp) + ": segment count disagrees with regenerators");
    }
    if (!arch_.b2b_zr_regeneration && lp.regen_plan.regen_count() > 0) {
      issues.push_back(lp_name(lp) + ": b2b regenerator in an architecture without them");
    }
    if (arch_.name == Architecture::OpIP && lp.route.size() != 2) {
      issues.push_back(lp_name(lp) + ": multi-hop lightpath in opaque network");
    }
    if (arch_.name != Architecture::TrIPandZR &&
        (lp.src_attachment != Attachment::RouterPort ||
         lp.dst_attachment != Attachment::RouterPort)) {
      issues.push_back(lp_name(lp) + ": b2b termination outside TrIPandZR");
    }
    if (arch_.name == Architecture::TrZR) {
      if (lp.chain_prev >= 0 || lp.chain_next >= 0) {
        issues.push_back(lp_name(lp) + ": IP regeneration in TrZR");
      }
      for (const Carried& c : lp.carried) {
        auto it = demands.find(c.demand_id);
        if (it != demands.end() &&
            (it->second.src != lp.src() || it->second.dst != lp.dst())) {
          issues.push_back(lp_name(lp) + ": carries demand " +
                           std::to_string(c.demand_id) + " with other endpoints");
        }
      }
    }
  }

  for (const ProvisioningRecord& r : records_) {
    int total = 0;
    for (const SubflowRoute& sf : r.subflows) {
      total += sf.rate_gbps;
      NodeIndex at = r.demand.src;
      for (int id : sf.lightpaths) {
        const Lightpath& lp = lightpaths_.at(id);
        if (lp.src() != at) issues.push_back("demand " + std::to_string(r.demand_id) + ": broken sub-flow route");
        at = lp.dst();
        bool found = std::any_of(lp.carried.begin(), lp.carried.end(),
                                 [&](const Carried& c) { return c.demand_id == r.demand_id; });
        if (!found) issues.push_back("demand " + std::to_string(r.demand_id) + ": lightpath does not carry it");
      }
      if (at != r.demand.dst) issues.push_back("demand " + std::to_string(r.demand_id) + ": sub-flow ends early");
    }
    if (total != r.demand.rate_gbps) {
      issues.push_back("demand " + std::to_string(r.demand_id) + ": provisioned rate mismatch");
    }
  }
  return issues;
}

int assign_spectrum_first_fit(NetworkState& state, std::span<const NodeIndex> segment,
                              int owner) {
  auto ch = state.first_fit(segment);
  if (!ch) throw NoSpectrum("no common free channel on " + format_path(state.topology(), segment));
  state.claim(segment, *ch, owner);
  return *ch;
}

// ---------------------------------------------------------------------------
// Planner

Planner::Planner(const Topology& topology, ArchitectureConfig arch,
                 PlannerConfig cfg, const ModeCatalog& catalog)
    : topology_(&topology), arch_(arch), cfg_(cfg), catalog_(&catalog) {
  cfg_.validate();
  const auto n = static_cast<NodeIndex>(topology.node_count());
  paths_.resize(static_cast<std::size_t>(n) * n);
  for (NodeIndex s = 0; s < n; ++s) {
    for (NodeIndex d = 0; d < n; ++d) {
      if (s != d) paths_[static_cast<std::size_t>(s) * n + d] = k_shortest_paths(topology, s, d, cfg_.k);
    }
  }
}

const std::vector<Path>& Planner::paths(NodeIndex s, NodeIndex d) const {
  return paths_.at(static_cast<std::size_t>(s) * topology_->node_count() + d);
}

double Planner::new_lightpath_penalty() const {
  return catalog_->cheapest_pair_cost() * cfg_.cost_scale_km;
}

namespace {

std::vector<double> link_lengths(const Topology& t, std::span<const NodeIndex> nodes) {
  std::vector<double> out;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    out.push_back(t.links()[*t.link_between(nodes[i - 1], nodes[i])].length_km);
  }
  return out;
}

// Highest rate that can cross every link of the route, regenerating as needed.
int sustained_rate(const Topology& t, std::span<const NodeIndex> nodes,
                   const ModeCatalog& catalog) {
  double longest = 0.0;
  for (double len : link_lengths(t, nodes)) longest = std::max(longest, len);
  auto f = feasible_modes(longest, catalog);
  return f.empty() ? 0 : f.front().rate_gbps;
}

std::vector<std::vector<NodeIndex>> segment_nodes(std::span<const NodeIndex> route,
                                                  const RegenPlan& plan) {
  std::vector<std::vector<NodeIndex>> out;
  for (const RegenSegment& s : plan.segments) {
    out.emplace_back(route.begin() + static_cast<std::ptrdiff_t>(s.first),
                     route.begin() + static_cast<std::ptrdiff_t>(s.last) + 1);
  }
  return out;
}

}  // namespace

std::vector<int> Planner::split_subflows(const Demand& d) const {
  int chunk = catalog_->max_rate_gbps();
  const Path& shortest = paths(d.src, d.dst).front();
  if (!arch_.optical_bypass) {
    // Every hop is its own lightpath; the weakest link bounds the rate.
    const int sustained = sustained_rate(*topology_, shortest.nodes, *catalog_);
    if (sustained > 0) chunk = sustained;
  } else if (cfg_.rate_downgrade) {
    auto feasible = feasible_modes(shortest.length_km, *catalog_);
    if (!feasible.empty()) chunk = feasible.front().rate_gbps;
  }
  std::vector<int> out;
  for (int left = d.rate_gbps; left > 0; left -= chunk) out.push_back(std::min(chunk, left));
  return out;
}

AuxGraph Planner::build_auxiliary_graph(const NetworkState& state,
                                        const Demand& d) const {
  const Topology& t = *topology_;
  AuxGraph g;
  g.node_count = t.node_count();
  const double penalty = new_lightpath_penalty();

  for (const Lightpath& lp : state.lightpaths()) {
    if (lp.residual_gbps() < d.rate_gbps) continue;
    if (!arch_.intermediate_ip_grooming && (lp.src() != d.src || lp.dst() != d.dst)) continue;
    AuxEdge e;
    e.from = lp.src();
    e.to = lp.dst();
    e.weight = cfg_.grooming_weight_factor * lp.length_km();
    e.kind = AuxEdgeKind::Groom;
    e.lightpath_id = lp.id;
    g.edges.push_back(std::move(e));
  }

  auto add_new = [&](std::vector<NodeIndex> route, std::vector<TransceiverMode> modes,
                     double length) {
    AuxEdge e;
    e.from = route.front();
    e.to = route.back();
    e.weight = length + penalty * static_cast<double>(modes.size());
    e.kind = AuxEdgeKind::NewLightpath;
    e.route = std::move(route);
    e.modes = std::move(modes);
    g.edges.push_back(std::move(e));
  };

  if (!arch_.optical_bypass) {
    for (const Link& l : t.links()) {
      for (auto [u, v] : {std::pair{l.a, l.b}, std::pair{l.b, l.a}}) {
        auto feasible = feasible_modes(l.length_km, *catalog_);
        if (feasible.empty() || feasible.front().rate_gbps < d.rate_gbps) {
          ++g.rejected_for_mode;
          continue;
        }
        const NodeIndex hop[] = {u, v};
        if (!state.first_fit(hop)) {
          ++g.rejected_for_spectrum;
          continue;
        }
        add_new({u, v}, {feasible.front()}, l.length_km);
      }
    }
    return g;
  }

  if (arch_.min_channel_policy()) {
    for (const Path& p : paths(d.src, d.dst)) {
      const auto lengths = link_lengths(t, p.nodes);
      std::vector<TransceiverMode> modes;
      try {
        modes = select_modes_min_channels(d.rate_gbps, lengths, *catalog_);
      } catch (const NoFeasibleMode&) {
        ++g.rejected_for_mode;
        continue;
      }
      std::vector<std::vector<NodeIndex>> segments;
      for (const auto& m : modes) {
        auto segs = segment_nodes(p.nodes, plan_regeneration(lengths, m));
        segments.insert(segments.end(), segs.begin(), segs.end());
      }
      if (!state.first_fit_all(segments)) {
        ++g.rejected_for_spectrum;
        continue;
      }
      add_new(p.nodes, std::move(modes), p.length_km);
    }
    return g;
  }

  // Transparent max-rate: a new lightpath may span any sub-path of the k
  // candidate routes, at the highest rate that reaches across it. Without
  // rate_downgrade it must also match the rate every link on it sustains.
  std::set<std::vector<NodeIndex>> seen;
  for (const Path& p : paths(d.src, d.dst)) {
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < p.nodes.size(); ++j) {
        std::vector<NodeIndex> sub(p.nodes.begin() + static_cast<std::ptrdiff_t>(i),
                                   p.nodes.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        if (!seen.insert(sub).second) continue;
        const double length = path_length_km(t, sub);
        auto feasible = feasible_modes(length, *catalog_);
        if (feasible.empty()) {
          ++g.rejected_for_mode;
          continue;
        }
        const TransceiverMode& mode = feasible.front();
        if (!cfg_.rate_downgrade && mode.rate_gbps < sustained_rate(t, sub, *catalog_)) continue;
        if (mode.rate_gbps < d.rate_gbps) {
          ++g.rejected_for_mode;
          continue;
        }
        if (!state.first_fit(sub)) {
          ++g.rejected_for_spectrum;
          continue;
        }
        add_new(std::move(sub), {mode}, length);
      }
    }
  }
  return g;
}

std::optional<std::vector<const AuxEdge*>> Planner::shortest_aux_path(
    const AuxGraph& g, NodeIndex s, NodeIndex d) const {
  const std::size_t n = g.node_count;
  std::vector<std::vector<const AuxEdge*>> out(n);
  for (const AuxEdge& e : g.edges) out[e.from].push_back(&e);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<const AuxEdge*> via(n, nullptr);
  std::vector<bool> done(n, false);
  dist[s] = 0.0;
  for (;;) {
    NodeIndex u = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = static_cast<NodeIndex>(v);
    }
    if (u < 0) return std::nullopt;
    if (u == d) break;
    done[u] = true;
    for (const AuxEdge* e : out[u]) {
      if (done[e->to]) continue;
      const double nd = dist[u] + e->weight;
      if (nd < dist[e->to]) {
        dist[e->to] = nd;
        via[e->to] = e;
      }
    }
  }
  std::vector<const AuxEdge*> path;
  for (NodeIndex at = d; at != s; at = via[at]->from) path.push_back(via[at]);
  std::reverse(path.begin(), path.end());
  return path;
}

void Planner::route_subflow(NetworkState& state, const Demand& d, int demand_id,
                            int rate, ProvisioningRecord& record) const {
  const Topology& t = *topology_;
  const Demand flow{d.src, d.dst, rate};
  const AuxGraph g = build_auxiliary_graph(state, flow);
  const auto path = shortest_aux_path(g, d.src, d.dst);
  if (!path) {
    if (g.rejected_for_spectrum == 0) {
      // Mode-limited (e.g. a link too long for this rate): retry in the next
      // smaller catalog rate.
      int lower = 0;
      for (const auto& m : catalog_->modes()) {
        if (m.rate_gbps < rate) lower = std::max(lower, m.rate_gbps);
      }
      if (lower > 0) {
        for (int left = rate; left > 0; left -= lower) {
          route_subflow(state, d, demand_id, std::min(lower, left), record);
        }
        return;
      }
    }
    const BlockReason reason =
        g.rejected_for_spectrum > 0 ? BlockReason::NoSpectrum : BlockReason::NoFeasibleMode;
    throw Blocked(demand_id, reason,
                  "demand " + t.node_name(d.src) + "->" + t.node_name(d.dst) + " " +
                      std::to_string(rate) + "G blocked: " + std::string(to_string(reason)));
  }

  SubflowRoute sf{rate, {}};
  int previous_new = -1;
  for (const AuxEdge* e : *path) {
    if (e->kind == AuxEdgeKind::Groom) {
      state.groom(e->lightpath_id, {demand_id, rate});
      sf.lightpaths.push_back(e->lightpath_id);
      previous_new = -1;
      continue;
    }
    Lightpath lp;
    lp.route = e->route;
    lp.mode = e->modes.front();
    const auto lengths = link_lengths(t, lp.route);
    lp.regen_plan = plan_regeneration(lengths, lp.mode);
    // Two new edges of one aux path may share fibers; channels are taken in
    // traversal order.
    auto ch = state.first_fit(lp.route);
    if (!ch) {
      throw Blocked(demand_id, BlockReason::NoSpectrum,
                    "demand " + t.node_name(d.src) + "->" + t.node_name(d.dst) +
                        ": spectrum exhausted on " + format_path(t, lp.route));
    }
    lp.segments.push_back(Segment{lp.route, *ch, path_length_km(t, lp.route)});
    lp.carried.push_back({demand_id, rate});
    const int id = state.add_lightpath(std::move(lp));
    record.new_lightpaths.push_back(id);
    if (previous_new >= 0) state.link_chain(previous_new, id);
    previous_new = id;
    sf.lightpaths.push_back(id);
  }
  record.subflows.push_back(std::move(sf));
}

void Planner::route_bundle(NetworkState& state, const Demand& d, int demand_id,
                           ProvisioningRecord& record) const {
  const Topology& t = *topology_;
  const AuxGraph g = build_auxiliary_graph(state, d);
  const AuxEdge* best = nullptr;
  for (const AuxEdge& e : g.edges) {
    if (e.from != d.src || e.to != d.dst) continue;
    if (!best || e.weight < best->weight) best = &e;
  }
  if (!best) {
    const BlockReason reason =
        g.rejected_for_spectrum > 0 ? BlockReason::NoSpectrum : BlockReason::NoFeasibleMode;
    throw Blocked(demand_id, reason,
                  "demand " + t.node_name(d.src) + "->" + t.node_name(d.dst) + " " +
                      std::to_string(d.rate_gbps) + "G blocked: " +
                      std::string(to_string(reason)));
  }
  if (best->kind == AuxEdgeKind::Groom) {
    state.groom(best->lightpath_id, {demand_id, d.rate_gbps});
    record.subflows.push_back({d.rate_gbps, {best->lightpath_id}});
    return;
  }

  const auto lengths = link_lengths(t, best->route);
  int left = d.rate_gbps;
  for (const TransceiverMode& mode : best->modes) {
    Lightpath lp;
    lp.route = best->route;
    lp.mode = mode;
    lp.regen_plan = plan_regeneration(lengths, mode);
    // Segments of one simple route share no fibers, so per-segment first-fit
    // is enough; earlier channels of the bundle are already claimed.
    for (auto& nodes : segment_nodes(lp.route, lp.regen_plan)) {
      auto ch = state.first_fit(nodes);
      if (!ch) {
        throw Blocked(demand_id, BlockReason::NoSpectrum,
                      "demand " + t.node_name(d.src) + "->" + t.node_name(d.dst) +
                          ": spectrum exhausted on " + format_path(t, nodes));
      }
      const double len = path_length_km(t, nodes);
      lp.segments.push_back(Segment{std::move(nodes), *ch, len});
    }
    const int share = std::min(left, mode.rate_gbps);
    left -= share;
    lp.carried.push_back({demand_id, share});
    const int id = state.add_lightpath(std::move(lp));
    record.new_lightpaths.push_back(id);
    record.subflows.push_back({share, {id}});
  }
}

ProvisioningRecord Planner::route_demand(NetworkState& state, const Demand& d,
                                         int demand_id) const {
  NetworkState trial = state;
  ProvisioningRecord record;
  record.demand_id = demand_id;
  record.demand = d;
  if (arch_.min_channel_policy()) {
    route_bundle(trial, d, demand_id, record);
  } else {
    for (int rate : split_subflows(d)) {
      route_subflow(trial, d, demand_id, rate, record);
    }
  }
  trial.add_record(record);
  state = std::move(trial);
  return record;
}

std::vector<int> demand_processing_order(const TrafficMatrix& matrix, DemandOrder order) {
  std::vector<int> idx(matrix.demands.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (order == DemandOrder::RateDesc) {
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      const Demand& x = matrix.demands[a];
      const Demand& y = matrix.demands[b];
      if (x.rate_gbps != y.rate_gbps) return x.rate_gbps > y.rate_gbps;
      return std::tie(x.src, x.dst) < std::tie(y.src, y.dst);
    });
  }
  return idx;
}

ProvisioningResult provision_all(const Topology& t, const TrafficMatrix& matrix,
                                 Architecture arch, const PlannerConfig& cfg,
                                 const ModeCatalog& catalog) {
  const ArchitectureConfig ac = ArchitectureConfig::of(arch);
  ProvisioningResult result{NetworkState(t, ac), {}};
  const Planner planner(t, ac, cfg, catalog);
  for (int id : demand_processing_order(matrix, cfg.demand_order)) {
    const Demand& d = matrix.demands[id];
    try {
      planner.route_demand(result.state, d, id);
    } catch (const Blocked& b) {
      result.blocked.push_back({id, d, b.reason()});
    }
  }
  result.state.finalize();
  return result;
}

std::string serialize_provisioning(const ProvisioningResult& result) {
  using json = nlohmann::json;
  const NetworkState& s = result.state;
  const Topology& t = s.topology();
  auto names = [&](std::span<const NodeIndex> nodes) {
    json arr = json::array();
    for (NodeIndex n : nodes) arr.push_back(t.node_name(n));
    return arr;
  };
  json lps = json::array();
  for (const Lightpath& lp : s.lightpaths()) {
    json segs = json::array();
    for (const Segment& seg : lp.segments) {
      segs.push_back({{"nodes", names(seg.nodes)},
                      {"channel", seg.channel},
                      {"length_km", seg.length_km}});
    }
    json regens = json::array();
    for (NodeIndex n : lp.regen_nodes()) {
      regens.push_back({{"node", t.node_name(n)}, {"kind", to_string(RegenKind::B2B)}});
    }
    json carried = json::array();
    for (const Carried& c : lp.carried) {
      carried.push_back({{"demand", c.demand_id}, {"rate_gbps", c.rate_gbps}});
    }
    lps.push_back({{"id", lp.id},
                   {"route", names(lp.route)},
                   {"mode",
                    {{"module", to_string(lp.mode.module)},
                     {"modulation", to_string(lp.mode.modulation)},
                     {"rate_gbps", lp.mode.rate_gbps},
                     {"reach_km", lp.mode.reach_km}}},
                   {"segments", segs},
                   {"regens", regens},
                   {"src_attachment", to_string(lp.src_attachment)},
                   {"dst_attachment", to_string(lp.dst_attachment)},
                   {"chain_prev", lp.chain_prev},
                   {"chain_next", lp.chain_next},
                   {"carried", carried}});
  }
  json demands = json::array();
  for (const ProvisioningRecord& r : s.records()) {
    json subflows = json::array();
    for (const SubflowRoute& sf : r.subflows) {
      subflows.push_back({{"rate_gbps", sf.rate_gbps}, {"lightpaths", sf.lightpaths}});
    }
    demands.push_back({{"id", r.demand_id},
                       {"src", t.node_name(r.demand.src)},
                       {"dst", t.node_name(r.demand.dst)},
                       {"rate_gbps", r.demand.rate_gbps},
                       {"subflows", subflows}});
  }
  json blocked = json::array();
  for (const BlockedDemand& b : result.blocked) {
    blocked.push_back({{"id", b.demand_id},
                       {"src", t.node_name(b.demand.src)},
                       {"dst", t.node_name(b.demand.dst)},
                       {"rate_gbps", b.demand.rate_gbps},
                       {"reason", to_string(b.reason)}});
  }
  json doc{{"topology", t.name()},
           {"architecture", to_string(s.architecture().name)},
           {"lightpaths", lps},
           {"demands", demands},
           {"blocked", blocked}};
  return doc.dump(2) + "\n";
}

}  // namespace ipowdm
