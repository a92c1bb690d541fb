#include "ipowdm/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

namespace ipowdm::oracle {

namespace {

struct Objective {
  double cost = 0.0;
  int ports = 0;

  Objective operator+(const Objective& o) const { return {cost + o.cost, ports + o.ports}; }
  Objective operator-(const Objective& o) const { return {cost - o.cost, ports - o.ports}; }
  bool operator<(const Objective& o) const {
    return std::tie(cost, ports) < std::tie(o.cost, o.ports);
  }
};

constexpr Objective kInfeasible{std::numeric_limits<double>::infinity(), 0};

bool feasible(const Objective& o) { return std::isfinite(o.cost); }

// Cheapest multiset of lightpath options covering load, by DP over the
// capacity grid. Each option: (rate, objective of one lightpath).
Objective cheapest_cover(int load, const std::vector<std::pair<int, Objective>>& options) {
  if (load <= 0) return {};
  if (options.empty()) return kInfeasible;
  int step = load;
  for (const auto& [rate, obj] : options) step = std::gcd(step, rate);
  const int cells = load / step;
  std::vector<Objective> best(cells + 1, kInfeasible);
  best[0] = {};
  for (int c = 1; c <= cells; ++c) {
    for (const auto& [rate, obj] : options) {
      const int prev = std::max(0, c - rate / step);
      if (!feasible(best[prev])) continue;
      const Objective cand = best[prev] + obj;
      if (!feasible(best[c]) || cand < best[c]) best[c] = cand;
    }
  }
  return best[cells];
}

std::vector<double> lengths_of(const Topology& t, const std::vector<NodeIndex>& nodes) {
  std::vector<double> out;
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    out.push_back(t.links()[*t.link_between(nodes[i - 1], nodes[i])].length_km);
  }
  return out;
}

}  // namespace

std::vector<Path> simple_paths(const Topology& t, NodeIndex s, NodeIndex d) {
  std::vector<Path> out;
  std::vector<bool> seen(t.node_count(), false);
  std::vector<NodeIndex> stack{s};
  seen[s] = true;
  auto dfs = [&](auto&& self, NodeIndex u) -> void {
    if (u == d) {
      out.push_back({stack, path_length_km(t, stack)});
      return;
    }
    for (const Adjacency& a : t.neighbors(u)) {
      if (seen[a.neighbor]) continue;
      seen[a.neighbor] = true;
      stack.push_back(a.neighbor);
      self(self, a.neighbor);
      stack.pop_back();
      seen[a.neighbor] = false;
    }
  };
  dfs(dfs, s);
  std::sort(out.begin(), out.end(), [](const Path& a, const Path& b) {
    return std::tie(a.length_km, a.nodes) < std::tie(b.length_km, b.nodes);
  });
  return out;
}

std::optional<int> min_regens(std::span<const double> link_lengths_km, double reach_km) {
  const std::size_t n = link_lengths_km.size();
  if (n > 20) throw InstanceTooLarge("min_regens: more than 20 links");
  for (double len : link_lengths_km) {
    if (len > reach_km) return std::nullopt;
  }
  if (n == 0) return 0;
  const std::uint32_t interior = static_cast<std::uint32_t>(n - 1);
  for (int k = 0; k <= static_cast<int>(interior); ++k) {
    for (std::uint32_t mask = 0; mask < (1u << interior); ++mask) {
      if (std::popcount(mask) != k) continue;
      // Bit i-1 set: regenerator at the node before link i.
      double run = 0.0;
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        if (i > 0 && (mask >> (i - 1)) & 1u) run = 0.0;
        run += link_lengths_km[i];
        ok = run <= reach_km;
      }
      if (ok) return k;
    }
  }
  return std::nullopt;
}

ChannelChoiceCost channel_choice_cost(std::span<const TransceiverMode> modes, int rate_gbps,
                                      std::span<const double> link_lengths_km) {
  ChannelChoiceCost c;
  double power = 0.0;
  int capacity = 0;
  c.channels = static_cast<int>(modes.size());
  for (const TransceiverMode& m : modes) {
    const int r = min_regens(link_lengths_km, m.reach_km).value();
    c.regens += r;
    power += (2 + 2 * r) * m.power_units;
    capacity += m.rate_gbps;
  }
  c.power_micro = std::llround(power * 1e6);
  c.spare_gbps = capacity - rate_gbps;
  return c;
}

std::optional<ChannelChoiceCost> best_channel_choice(int rate_gbps,
                                                     std::span<const double> link_lengths_km,
                                                     const ModeCatalog& catalog) {
  std::vector<TransceiverMode> usable;
  for (const auto& m : catalog.modes()) {
    if (min_regens(link_lengths_km, m.reach_km)) usable.push_back(m);
  }
  if (usable.empty()) return std::nullopt;
  const int max_len = (rate_gbps + catalog.min_rate_gbps() - 1) / catalog.min_rate_gbps();
  std::optional<ChannelChoiceCost> best;
  std::vector<TransceiverMode> tuple;
  auto visit = [&](auto&& self, int capacity) -> void {
    if (capacity >= rate_gbps) {
      const auto c = channel_choice_cost(tuple, rate_gbps, link_lengths_km);
      if (!best || c < *best) best = c;
      return;
    }
    if (static_cast<int>(tuple.size()) == max_len) return;
    for (const auto& m : usable) {
      tuple.push_back(m);
      self(self, capacity + m.rate_gbps);
      tuple.pop_back();
    }
  };
  visit(visit, 0);
  return best;
}

ProvisionOptimum min_cost_provision(const Topology& t, std::span<const Demand> input,
                                    Architecture arch, const ModeCatalog& catalog,
                                    const PlannerConfig& planner) {
  if (t.node_count() > 5) throw InstanceTooLarge("oracle: more than 5 nodes");
  if (input.size() > 8) throw InstanceTooLarge("oracle: more than 8 demands");

  std::vector<Demand> demands;
  if (arch == Architecture::TrZR) {
    demands.assign(input.begin(), input.end());
  } else {
    const Planner split(t, ArchitectureConfig::of(arch), planner, catalog);
    for (const Demand& d : input) {
      for (int rate : split.split_subflows(d)) demands.push_back({d.src, d.dst, rate});
    }
  }
  const auto n = static_cast<NodeIndex>(t.node_count());
  const auto pair = [n](NodeIndex u, NodeIndex v) { return static_cast<std::size_t>(u) * n + v; };

  std::vector<std::vector<Path>> routes(static_cast<std::size_t>(n) * n);
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeIndex v = 0; v < n; ++v) {
      if (u != v) routes[pair(u, v)] = simple_paths(t, u, v);
    }
  }

  // Lightpath options per ordered node pair.
  std::vector<std::vector<std::pair<int, Objective>>> options(routes.size());
  for (NodeIndex u = 0; u < n; ++u) {
    for (NodeIndex v = 0; v < n; ++v) {
      if (u == v) continue;
      auto& opts = options[pair(u, v)];
      if (arch == Architecture::TrZR) {
        for (const Path& p : routes[pair(u, v)]) {
          const auto lengths = lengths_of(t, p.nodes);
          for (const auto& m : catalog.modes()) {
            if (auto r = min_regens(lengths, m.reach_km)) {
              opts.push_back({m.rate_gbps, {2.0 * (1 + *r) * m.cost_units, 2}});
            }
          }
        }
      } else {
        double distance = 0.0;
        if (arch == Architecture::OpIP) {
          auto link = t.link_between(u, v);
          if (!link) continue;
          distance = t.links()[*link].length_km;
        } else {
          distance = routes[pair(u, v)].front().length_km;
        }
        for (const auto& m : catalog.modes()) {
          if (m.reach_km >= distance) opts.push_back({m.rate_gbps, {2.0 * m.cost_units, 2}});
        }
      }
    }
  }

  // Logical routes per demand: node sequences whose hops all have options.
  std::vector<std::vector<std::vector<NodeIndex>>> logical(demands.size());
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const Demand& d = demands[i];
    if (arch == Architecture::TrZR) {
      if (!options[pair(d.src, d.dst)].empty()) logical[i].push_back({d.src, d.dst});
      continue;
    }
    std::vector<bool> seen(n, false);
    std::vector<NodeIndex> stack{d.src};
    seen[d.src] = true;
    auto dfs = [&](auto&& self, NodeIndex u) -> void {
      if (u == d.dst) {
        logical[i].push_back(stack);
        return;
      }
      for (NodeIndex v = 0; v < n; ++v) {
        if (seen[v] || options[pair(u, v)].empty()) continue;
        seen[v] = true;
        stack.push_back(v);
        self(self, v);
        stack.pop_back();
        seen[v] = false;
      }
    };
    dfs(dfs, d.src);
  }

  ProvisionOptimum result;
  for (const auto& l : logical) {
    if (l.empty()) return result;
  }

  std::map<std::pair<std::size_t, int>, Objective> memo;
  auto cover = [&](std::size_t p, int load) {
    auto key = std::pair{p, load};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    return memo[key] = cheapest_cover(load, options[p]);
  };

  std::vector<std::size_t> order(demands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Demand& x = demands[a];
    const Demand& y = demands[b];
    return std::tuple(-x.rate_gbps, x.src, x.dst) < std::tuple(-y.rate_gbps, y.src, y.dst);
  });
  // Interchangeable items take routes in non-decreasing index order.
  std::vector<bool> same_as_previous(order.size(), false);
  for (std::size_t j = 1; j < order.size(); ++j) {
    same_as_previous[j] = demands[order[j]] == demands[order[j - 1]];
  }
  std::vector<std::size_t> chosen(order.size(), 0);

  std::vector<int> load(routes.size(), 0);
  Objective best = kInfeasible;
  auto search = [&](auto&& self, std::size_t depth, Objective current) -> void {
    if (feasible(best) && !(current < best)) return;
    if (depth == order.size()) {
      best = current;
      return;
    }
    const std::size_t i = order[depth];
    const int rate = demands[i].rate_gbps;
    const std::size_t first = same_as_previous[depth] ? chosen[depth - 1] : 0;
    for (std::size_t ri = first; ri < logical[i].size(); ++ri) {
      const auto& route = logical[i][ri];
      chosen[depth] = ri;
      Objective next = current;
      for (std::size_t h = 1; h < route.size(); ++h) {
        const std::size_t p = pair(route[h - 1], route[h]);
        next = next - cover(p, load[p]) + cover(p, load[p] + rate);
        load[p] += rate;
      }
      if (feasible(next)) self(self, depth + 1, next);
      for (std::size_t h = 1; h < route.size(); ++h) load[pair(route[h - 1], route[h])] -= rate;
    }
  };
  search(search, 0, Objective{});

  if (!feasible(best)) return result;
  result.feasible = true;
  result.module_cost = best.cost;
  result.router_ports = best.ports;
  result.lightpaths = best.ports / 2;
  return result;
}

}  // namespace ipowdm::oracle
