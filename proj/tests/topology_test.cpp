#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "ipowdm/experiment.hpp"
#include "ipowdm/oracle.hpp"
#include "ipowdm/topology.hpp"

namespace ipowdm {
namespace {

Topology triangle() {
  return Topology("tri", {"A", "B", "C"},
                  {{"A", "B", 1.0}, {"B", "C", 1.0}, {"A", "C", 3.0}});
}

Topology random_topology(std::mt19937_64& rng, int nodes) {
  std::vector<std::string> names;
  for (int i = 0; i < nodes; ++i) names.push_back("N" + std::to_string(i));
  std::uniform_int_distribution<int> len(1, 9);
  std::bernoulli_distribution extra(0.45);
  std::vector<LinkSpec> links;
  // Spanning chain keeps the graph connected.
  for (int i = 1; i < nodes; ++i) {
    links.push_back({names[i - 1], names[i], 100.0 * len(rng)});
  }
  for (int i = 0; i < nodes; ++i) {
    for (int j = i + 2; j < nodes; ++j) {
      if (extra(rng)) links.push_back({names[i], names[j], 100.0 * len(rng)});
    }
  }
  return Topology("rand", names, links);
}

TEST(Topology, MinimalGraph) {
  Topology t("pair", {"A", "B"}, {{"A", "B", 100.0}});
  EXPECT_EQ(t.links().size(), 1u);
  EXPECT_EQ(t.degree(t.index_of("A")), 1);
  EXPECT_EQ(t.degree(t.index_of("B")), 1);
  EXPECT_EQ(t.fiber_count(), 2);
  EXPECT_NE(t.fiber(0, 1), t.fiber(1, 0));
}

TEST(Topology, RejectsBadInput) {
  EXPECT_THROW(Topology("x", {"A", "B"}, {{"A", "B", 0.0}}), TopologyError);
  EXPECT_THROW(Topology("x", {"A", "B"}, {{"A", "B", -5.0}}), TopologyError);
  EXPECT_THROW(Topology("x", {"A", "A"}, {{"A", "A", 5.0}}), TopologyError);
  EXPECT_THROW(Topology("x", {"A", "B"}, {{"A", "A", 5.0}}), TopologyError);
  EXPECT_THROW(Topology("x", {"A", "B"}, {{"A", "C", 5.0}}), TopologyError);
  EXPECT_THROW(Topology("x", {"A", "B"}, {{"A", "B", 5.0}, {"B", "A", 6.0}}),
               TopologyError);
  EXPECT_THROW(Topology("x", {"A", "B", "C", "D"}, {{"A", "B", 5.0}, {"C", "D", 5.0}}),
               TopologyError);
  EXPECT_THROW(Topology("x", {}, {}), TopologyError);
}

TEST(Topology, ZeroLengthMessage) {
  try {
    parse_topology(R"({"name":"x","nodes":["A","B"],"links":[{"a":"A","b":"B","length_km":0}]})");
    FAIL();
  } catch (const TopologyError& e) {
    EXPECT_NE(std::string(e.what()).find("non-positive length"), std::string::npos);
  }
}

TEST(Topology, SchemaErrors) {
  EXPECT_THROW(parse_topology("not json"), TopologyError);
  EXPECT_THROW(parse_topology(R"({"name":"x","nodes":["A"]})"), TopologyError);
  EXPECT_THROW(parse_topology(R"({"name":"x","nodes":["A","B"],"links":[{"a":"A","b":"B"}]})"),
               TopologyError);
}

TEST(Topology, RoundTrip) {
  for (const char* name : {"J14", "G17"}) {
    Topology t = resolve_topology(name);
    EXPECT_EQ(parse_topology(serialize_topology(t)), t) << name;
  }
  Topology t = triangle();
  EXPECT_EQ(parse_topology(serialize_topology(t)), t);
}

TEST(Topology, ShippedNetworks) {
  Topology j14 = resolve_topology("J14");
  Topology g17 = resolve_topology("G17");
  EXPECT_EQ(j14.node_count(), 14u);
  EXPECT_EQ(g17.node_count(), 17u);
  EXPECT_EQ(j14.grid().channel_count, 50);
  EXPECT_EQ(g17.grid().channel_count, 50);
  for (const Topology* t : {&j14, &g17}) {
    for (const Link& l : t->links()) EXPECT_LE(l.length_km, 3000.0);
  }
}

TEST(PathLength, Additive) {
  Topology t("line", {"A", "B", "C"}, {{"A", "B", 100.0}, {"B", "C", 250.0}});
  std::vector<NodeIndex> a{0};
  std::vector<NodeIndex> ab{0, 1};
  std::vector<NodeIndex> abc{0, 1, 2};
  std::vector<NodeIndex> ac{0, 2};
  EXPECT_EQ(path_length_km(t, a), 0.0);
  EXPECT_EQ(path_length_km(t, ab), 100.0);
  EXPECT_EQ(path_length_km(t, abc), 350.0);
  EXPECT_THROW(path_length_km(t, ac), TopologyError);
}

TEST(KShortestPaths, Triangle) {
  Topology t = triangle();
  auto paths = k_shortest_paths(t, 0, 2, 2);
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_EQ(paths[0].nodes, (std::vector<NodeIndex>{0, 1, 2}));
  EXPECT_EQ(paths[0].length_km, 2.0);
  EXPECT_EQ(paths[1].nodes, (std::vector<NodeIndex>{0, 2}));
  EXPECT_EQ(paths[1].length_km, 3.0);
}

TEST(KShortestPaths, Saturates) {
  Topology t = triangle();
  EXPECT_EQ(k_shortest_paths(t, 0, 2, 10).size(), 2u);
  EXPECT_EQ(oracle::simple_paths(t, 0, 2).size(), 2u);
}

TEST(KShortestPaths, RejectsBadArguments) {
  Topology t = triangle();
  EXPECT_THROW(k_shortest_paths(t, 0, 0, 1), std::invalid_argument);
  EXPECT_THROW(k_shortest_paths(t, 0, 1, 0), std::invalid_argument);
  EXPECT_THROW(k_shortest_paths(t, 0, 7, 1), TopologyError);
}

TEST(KShortestPaths, MatchesEnumerationOnRandomGraphs) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + trial % 4;
    Topology t = random_topology(rng, n);
    for (NodeIndex s = 0; s < n; ++s) {
      for (NodeIndex d = 0; d < n; ++d) {
        if (s == d) continue;
        auto all = oracle::simple_paths(t, s, d);
        for (int k : {1, 2, 3, 5, 50}) {
          auto got = k_shortest_paths(t, s, d, k);
          const std::size_t want = std::min<std::size_t>(k, all.size());
          ASSERT_EQ(got.size(), want);
          for (std::size_t i = 0; i < want; ++i) {
            // Lengths are multiples of 100 km, so sums are exact.
            EXPECT_EQ(got[i].length_km, all[i].length_km);
            EXPECT_EQ(got[i].nodes, all[i].nodes);
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace ipowdm
