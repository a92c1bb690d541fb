#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ipowdm {

// Nodes are stored sorted by name, so index order is lexicographic order.
using NodeIndex = int;

class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChannelGrid {
  int channel_count = 50;
  int spacing_ghz = 100;

  bool operator==(const ChannelGrid&) const = default;
};

// Undirected fiber pair as written in a topology document.
struct LinkSpec {
  std::string a;
  std::string b;
  double length_km = 0.0;
};

// Normalized link: a < b. Link i owns directed fibers 2i (a->b) and 2i+1 (b->a).
struct Link {
  NodeIndex a = 0;
  NodeIndex b = 0;
  double length_km = 0.0;

  bool operator==(const Link&) const = default;
};

struct Adjacency {
  NodeIndex neighbor = 0;
  int link = 0;
};

struct Path {
  std::vector<NodeIndex> nodes;
  double length_km = 0.0;

  bool operator==(const Path&) const = default;
};

class Topology {
 public:
  // Validates every structural invariant; throws TopologyError naming the
  // offending element.
  Topology(std::string name, std::vector<std::string> nodes,
           std::vector<LinkSpec> links, ChannelGrid grid = {});

  const std::string& name() const { return name_; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::string& node_name(NodeIndex n) const { return nodes_.at(n); }
  const std::vector<Link>& links() const { return links_; }
  const ChannelGrid& grid() const { return grid_; }

  std::optional<NodeIndex> find(std::string_view name) const;
  NodeIndex index_of(std::string_view name) const;

  int degree(NodeIndex n) const {
    return static_cast<int>(adjacency_.at(n).size());
  }
  // Sorted by neighbor index.
  std::span<const Adjacency> neighbors(NodeIndex n) const {
    return adjacency_.at(n);
  }
  std::optional<int> link_between(NodeIndex u, NodeIndex v) const;

  int fiber_count() const { return 2 * static_cast<int>(links_.size()); }
  // Directed fiber carrying u -> v. Throws if u and v are not adjacent.
  int fiber(NodeIndex u, NodeIndex v) const;

  bool operator==(const Topology& other) const {
    return name_ == other.name_ && nodes_ == other.nodes_ &&
           links_ == other.links_ && grid_ == other.grid_;
  }

 private:
  std::string name_;
  std::vector<std::string> nodes_;
  std::vector<Link> links_;
  ChannelGrid grid_;
  std::vector<std::vector<Adjacency>> adjacency_;
};

Topology parse_topology(std::string_view document);
Topology load_topology(const std::string& path);
std::string serialize_topology(const Topology& t);

// Sum of link lengths along consecutive node pairs. Throws TopologyError on a
// non-adjacent pair.
double path_length_km(const Topology& t, std::span<const NodeIndex> path);

// Loop-free paths from s to d in ascending (length, node sequence) order,
// at most k of them (Yen's algorithm).
std::vector<Path> k_shortest_paths(const Topology& t, NodeIndex s, NodeIndex d,
                                   int k);

std::string format_path(const Topology& t, std::span<const NodeIndex> path);

}  // namespace ipowdm
