#include "ipowdm/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace ipowdm {

namespace {

using json = nlohmann::json;

std::string link_label(const LinkSpec& l) { return l.a + "-" + l.b; }

}  // namespace

Topology::Topology(std::string name, std::vector<std::string> nodes,
                   std::vector<LinkSpec> links, ChannelGrid grid)
    : name_(std::move(name)), nodes_(std::move(nodes)), grid_(grid) {
  if (nodes_.empty()) throw TopologyError("topology has no nodes");
  if (grid_.channel_count < 1) {
    throw TopologyError("grid: channel_count must be >= 1, got " +
                        std::to_string(grid_.channel_count));
  }
  if (grid_.spacing_ghz < 1) {
    throw TopologyError("grid: spacing_ghz must be >= 1, got " +
                        std::to_string(grid_.spacing_ghz));
  }
  std::sort(nodes_.begin(), nodes_.end());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].empty()) throw TopologyError("node with empty name");
    if (i > 0 && nodes_[i] == nodes_[i - 1]) {
      throw TopologyError("duplicate node " + nodes_[i]);
    }
  }

  std::set<std::pair<NodeIndex, NodeIndex>> seen;
  for (const LinkSpec& spec : links) {
    auto a = find(spec.a);
    auto b = find(spec.b);
    if (!a) throw TopologyError("link " + link_label(spec) + ": unknown node " + spec.a);
    if (!b) throw TopologyError("link " + link_label(spec) + ": unknown node " + spec.b);
    if (*a == *b) throw TopologyError("link " + link_label(spec) + ": self-loop");
    if (!(spec.length_km > 0.0) || !std::isfinite(spec.length_km)) {
      std::ostringstream msg;
      msg << "link " << link_label(spec) << ": non-positive length "
          << spec.length_km;
      throw TopologyError(msg.str());
    }
    auto key = std::minmax(*a, *b);
    if (!seen.insert(key).second) {
      throw TopologyError("link " + link_label(spec) + ": duplicate link");
    }
    links_.push_back(Link{key.first, key.second, spec.length_km});
  }
  std::sort(links_.begin(), links_.end(), [](const Link& x, const Link& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });

  adjacency_.assign(nodes_.size(), {});
  for (int i = 0; i < static_cast<int>(links_.size()); ++i) {
    adjacency_[links_[i].a].push_back({links_[i].b, i});
    adjacency_[links_[i].b].push_back({links_[i].a, i});
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end(),
              [](const Adjacency& x, const Adjacency& y) {
                return x.neighbor < y.neighbor;
              });
  }

  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    if (adjacency_[n].empty()) {
      throw TopologyError("node " + nodes_[n] + ": degree 0 (disconnected graph)");
    }
  }
  std::vector<bool> reached(nodes_.size(), false);
  std::vector<NodeIndex> stack{0};
  reached[0] = true;
  while (!stack.empty()) {
    NodeIndex u = stack.back();
    stack.pop_back();
    for (const Adjacency& adj : adjacency_[u]) {
      if (!reached[adj.neighbor]) {
        reached[adj.neighbor] = true;
        stack.push_back(adj.neighbor);
      }
    }
  }
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    if (!reached[n]) {
      throw TopologyError("disconnected graph: node " + nodes_[n] +
                          " unreachable from " + nodes_[0]);
    }
  }
}

std::optional<NodeIndex> Topology::find(std::string_view name) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end() || *it != name) return std::nullopt;
  return static_cast<NodeIndex>(it - nodes_.begin());
}

NodeIndex Topology::index_of(std::string_view name) const {
  auto n = find(name);
  if (!n) throw TopologyError("unknown node " + std::string(name));
  return *n;
}

std::optional<int> Topology::link_between(NodeIndex u, NodeIndex v) const {
  for (const Adjacency& adj : adjacency_.at(u)) {
    if (adj.neighbor == v) return adj.link;
  }
  return std::nullopt;
}

int Topology::fiber(NodeIndex u, NodeIndex v) const {
  auto l = link_between(u, v);
  if (!l) {
    throw TopologyError("nodes " + node_name(u) + " and " + node_name(v) +
                        " are not adjacent");
  }
  return 2 * *l + (links_[*l].a == u ? 0 : 1);
}

Topology parse_topology(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw TopologyError(std::string("schema: ") + e.what());
  }
  try {
    if (!doc.is_object()) throw TopologyError("schema: document is not an object");
    for (const char* key : {"name", "nodes", "links"}) {
      if (!doc.contains(key)) throw TopologyError(std::string("schema: missing field '") + key + "'");
    }
    std::string name = doc.at("name").get<std::string>();
    std::vector<std::string> nodes = doc.at("nodes").get<std::vector<std::string>>();
    std::vector<LinkSpec> links;
    const json& jlinks = doc.at("links");
    if (!jlinks.is_array()) throw TopologyError("schema: 'links' is not an array");
    for (std::size_t i = 0; i < jlinks.size(); ++i) {
      const json& l = jlinks[i];
      for (const char* key : {"a", "b", "length_km"}) {
        if (!l.is_object() || !l.contains(key)) {
          throw TopologyError("schema: links[" + std::to_string(i) +
                              "] missing field '" + key + "'");
        }
      }
      links.push_back(LinkSpec{l.at("a").get<std::string>(),
                               l.at("b").get<std::string>(),
                               l.at("length_km").get<double>()});
    }
    ChannelGrid grid;
    if (doc.contains("grid")) {
      const json& g = doc.at("grid");
      grid.channel_count = g.value("channel_count", grid.channel_count);
      grid.spacing_ghz = g.value("spacing_ghz", grid.spacing_ghz);
    }
    return Topology(std::move(name), std::move(nodes), std::move(links), grid);
  } catch (const json::exception& e) {
    throw TopologyError(std::string("schema: ") + e.what());
  }
}

Topology load_topology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open topology file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_topology(buf.str());
}

std::string serialize_topology(const Topology& t) {
  json doc;
  doc["name"] = t.name();
  doc["nodes"] = t.nodes();
  json links = json::array();
  for (const Link& l : t.links()) {
    links.push_back({{"a", t.node_name(l.a)},
                     {"b", t.node_name(l.b)},
                     {"length_km", l.length_km}});
  }
  doc["links"] = std::move(links);
  doc["grid"] = {{"channel_count", t.grid().channel_count},
                 {"spacing_ghz", t.grid().spacing_ghz}};
  return doc.dump(2) + "\n";
}

double path_length_km(const Topology& t, std::span<const NodeIndex> path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    auto l = t.link_between(path[i - 1], path[i]);
    if (!l) {
      throw TopologyError("path step " + t.node_name(path[i - 1]) + "->" +
                          t.node_name(path[i]) + " is not a link");
    }
    total += t.links()[*l].length_km;
  }
  return total;
}

namespace {

bool path_less(const Path& x, const Path& y) {
  if (x.length_km != y.length_km) return x.length_km < y.length_km;
  return x.nodes < y.nodes;
}

// Shortest s->d path avoiding the given nodes and directed edges. Labels are
// compared by (distance, node sequence) so ties resolve lexicographically.
std::optional<Path> constrained_shortest(const Topology& t, NodeIndex s,
                                         NodeIndex d,
                                         const std::vector<bool>& banned_node,
                                         const std::set<std::pair<NodeIndex, NodeIndex>>& banned_edge) {
  const std::size_t n = t.node_count();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<std::vector<NodeIndex>> seq(n);
  std::vector<bool> done(n, false);
  dist[s] = 0.0;
  seq[s] = {s};
  auto better = [&](double d1, const std::vector<NodeIndex>& s1, double d2,
                    const std::vector<NodeIndex>& s2) {
    if (d1 != d2) return d1 < d2;
    return s1 < s2;
  };
  for (;;) {
    NodeIndex u = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v] || dist[v] == kInf) continue;
      if (u < 0 || better(dist[v], seq[v], dist[u], seq[u])) u = static_cast<NodeIndex>(v);
    }
    if (u < 0) return std::nullopt;
    if (u == d) return Path{seq[u], dist[u]};
    done[u] = true;
    for (const Adjacency& adj : t.neighbors(u)) {
      NodeIndex v = adj.neighbor;
      if (done[v] || banned_node[v] || banned_edge.count({u, v})) continue;
      double nd = dist[u] + t.links()[adj.link].length_km;
      std::vector<NodeIndex> ns = seq[u];
      ns.push_back(v);
      if (dist[v] == kInf || better(nd, ns, dist[v], seq[v])) {
        dist[v] = nd;
        seq[v] = std::move(ns);
      }
    }
  }
}

}  // namespace

std::vector<Path> k_shortest_paths(const Topology& t, NodeIndex s, NodeIndex d,
                                   int k) {
  const auto n = static_cast<NodeIndex>(t.node_count());
  if (s < 0 || s >= n || d < 0 || d >= n) {
    throw TopologyError("k_shortest_paths: endpoint not in topology");
  }
  if (s == d) throw std::invalid_argument("k_shortest_paths: source equals destination");
  if (k < 1) throw std::invalid_argument("k_shortest_paths: k must be >= 1");

  std::vector<Path> accepted;
  auto first = constrained_shortest(t, s, d, std::vector<bool>(n, false), {});
  if (!first) return accepted;
  accepted.push_back(std::move(*first));

  auto cmp = [](const Path& x, const Path& y) { return path_less(x, y); };
  std::set<Path, decltype(cmp)> candidates(cmp);

  while (static_cast<int>(accepted.size()) < k) {
    const Path& prev = accepted.back();
    for (std::size_t i = 0; i + 1 < prev.nodes.size(); ++i) {
      const NodeIndex spur = prev.nodes[i];
      std::vector<NodeIndex> root(prev.nodes.begin(), prev.nodes.begin() + i + 1);
      std::set<std::pair<NodeIndex, NodeIndex>> banned_edge;
      for (const Path& p : accepted) {
        if (p.nodes.size() > i + 1 &&
            std::equal(root.begin(), root.end(), p.nodes.begin())) {
          banned_edge.insert({p.nodes[i], p.nodes[i + 1]});
        }
      }
      std::vector<bool> banned_node(n, false);
      for (std::size_t r = 0; r < i; ++r) banned_node[root[r]] = true;
      auto tail = constrained_shortest(t, spur, d, banned_node, banned_edge);
      if (!tail) continue;
      Path total;
      total.nodes = root;
      total.nodes.insert(total.nodes.end(), tail->nodes.begin() + 1, tail->nodes.end());
      total.length_km = path_length_km(t, total.nodes);
      if (std::find(accepted.begin(), accepted.end(), total) == accepted.end()) {
        candidates.insert(std::move(total));
      }
    }
    if (candidates.empty()) break;
    accepted.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  return accepted;
}

std::string format_path(const Topology& t, std::span<const NodeIndex> path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '-';
    out += t.node_name(path[i]);
  }
  return out;
}

}  // namespace ipowdm
