#include <gtest/gtest.h>

#include "ipowdm/dimensioning.hpp"
#include "ipowdm/experiment.hpp"

namespace ipowdm {
namespace {

const ModeCatalog& cat() { return ModeCatalog::standard(); }

TrafficMatrix matrix(std::vector<Demand> demands) {
  TrafficMatrix m;
  m.demands = std::move(demands);
  return m;
}

TEST(NodePlant, OpaqueDegreeTwo) {
  auto e = node_plant(2, ArchitectureConfig::of(Architecture::OpIP), 50);
  EXPECT_EQ(e.awg, 4);
  EXPECT_EQ(e.oa, 4);
  EXPECT_EQ(e.monitoring_units, 2);
  EXPECT_EQ(e.monitoring, MonitoringKind::Opaque);
  EXPECT_EQ(e.router_chassis, 1);
  EXPECT_EQ(e.router_ports, 0);
  EXPECT_EQ(e.iroadm, 0);
  EXPECT_EQ(e.shelves, 1);
}

TEST(NodePlant, TransparentDegreeThree) {
  DimensioningConfig cfg;
  auto e = node_plant(3, ArchitectureConfig::of(Architecture::TrIP), 50, cfg);
  EXPECT_EQ(e.iroadm, 3);
  EXPECT_EQ(e.monitoring_units, 3);
  EXPECT_EQ(e.monitoring, MonitoringKind::Transparent);
  // Add/drop sized for 3 * 50 channels at 25 per bank.
  EXPECT_EQ(e.adb, 6);
  EXPECT_EQ(e.awg, e.adb);
  EXPECT_EQ(e.oa, e.adb);
  EXPECT_EQ(e.shelves, 1);
}

TEST(NodePlant, ShelvesGrowWithSlots) {
  DimensioningConfig cfg;
  auto e = node_plant(5, ArchitectureConfig::of(Architecture::TrZR), 50, cfg);
  // 5 I-ROADMs * 3 + 10 OAs * 1 = 25 slots.
  EXPECT_EQ(e.adb, 10);
  EXPECT_EQ(e.shelves, 2);
}

TEST(NodePlant, IdenticalAcrossTransparentArchitectures) {
  for (int degree = 1; degree <= 6; ++degree) {
    auto a = node_plant(degree, ArchitectureConfig::of(Architecture::TrIP), 50);
    for (Architecture arch : {Architecture::TrZR, Architecture::TrIPandZR}) {
      EXPECT_EQ(node_plant(degree, ArchitectureConfig::of(arch), 50), a);
    }
  }
}

TEST(DimensionNode, OneTerminatingLightpath) {
  Topology t("pair", {"A", "B"}, {{"A", "B", 100.0}});
  auto r = provision_all(t, matrix({{0, 1, 400}}), Architecture::OpIP);
  auto e = dimension_node(r.state, 0);
  EXPECT_EQ(e.plugged_zr, 1);
  EXPECT_EQ(e.router_ports, 1);
  EXPECT_EQ(e.plugged_zrplus, 0);
}

TEST(DimensionNode, B2BRegeneratorOutsideRouter) {
  Topology t("line", {"A", "B", "C"}, {{"A", "B", 400.0}, {"B", "C", 400.0}});
  auto r = provision_all(t, matrix({{0, 2, 400}}), Architecture::TrZR);
  auto mid = dimension_node(r.state, 1);
  EXPECT_EQ(mid.b2b_zrplus, 2);
  EXPECT_EQ(mid.router_ports, 0);
  auto p = power_of(mid);
  EXPECT_DOUBLE_EQ(p.zr_zrplus, 2.6);
  EXPECT_DOUBLE_EQ(p.ip_router, 50.0);
}

TEST(PowerOf, Examples) {
  NodeEquipment e;
  e.router_chassis = 1;
  e.plugged_zr = 4;
  e.router_ports = 4;
  auto p = power_of(e);
  EXPECT_DOUBLE_EQ(p.ip_router, 66.0);
  EXPECT_DOUBLE_EQ(p.zr_zrplus, 4.0);
  EXPECT_DOUBLE_EQ(p.optical, 0.0);

  auto zero = power_of(NodeEquipment{});
  EXPECT_EQ(zero, PowerBreakdown{});

  NodeEquipment b2b;
  b2b.b2b_zrplus = 2;
  auto q = power_of(b2b);
  EXPECT_DOUBLE_EQ(q.zr_zrplus, 2.6);
  EXPECT_DOUBLE_EQ(q.ip_router, 0.0);
}

TEST(PowerOf, OpticalDevices) {
  auto e = node_plant(2, ArchitectureConfig::of(Architecture::OpIP), 50);
  // Shelf + 4 OA + 4 AWG + 2 opaque monitoring units.
  EXPECT_DOUBLE_EQ(power_of(e).optical, 20 + 4 * 1.7 + 4 * 0.3 + 2 * 0.3);
  auto tr = node_plant(3, ArchitectureConfig::of(Architecture::TrIP), 50);
  EXPECT_DOUBLE_EQ(power_of(tr).optical, 20 + 3 * 4.1 + 6 * 1.7 + 6 * 0.3 + 3 * 1.5);
}

TEST(PowerOf, ScalesLinearly) {
  auto e = node_plant(4, ArchitectureConfig::of(Architecture::TrIPandZR), 50);
  e.plugged_zr = 3;
  e.plugged_zrplus = 5;
  e.b2b_zrplus = 2;
  e.router_ports = 8;
  const PowerTable pt;
  for (double f : {0.5, 2.0, 10.0}) {
    auto a = power_of(e, pt.scaled(f));
    auto b = power_of(e, pt);
    EXPECT_NEAR(a.total, f * b.total, 1e-9);
    EXPECT_NEAR(a.optical, f * b.optical, 1e-9);
  }
}

TEST(PowerTable, Validation) {
  PowerTable pt;
  EXPECT_NO_THROW(pt.validate());
  pt.shelf = -1;
  EXPECT_THROW(pt.validate(), std::invalid_argument);
  DimensioningConfig cfg;
  cfg.shelf_capacity_slots = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(PlantModel, ParseAndRoundTrip) {
  auto m = parse_plant_model(R"({"power": {"shelf": 25}, "dimensioning": {"adb_capacity_channels": 50}})");
  EXPECT_EQ(m.power.shelf, 25);
  EXPECT_EQ(m.power.zr, 1.0);
  EXPECT_EQ(m.dimensioning.adb_capacity_channels, 50);
  auto back = parse_plant_model(serialize_plant_model(m));
  EXPECT_EQ(back.power, m.power);
  EXPECT_EQ(back.dimensioning, m.dimensioning);
  EXPECT_THROW(parse_plant_model(R"({"power": {"laser": 1}})"), std::invalid_argument);
  EXPECT_THROW(parse_plant_model(R"({"cooling": {}})"), std::invalid_argument);
}

TEST(PlantModel, ShippedFileMatchesDefaults) {
  auto m = load_plant_model(data_dir() + "/plant.json");
  EXPECT_EQ(m.power, PowerTable{});
  EXPECT_EQ(m.dimensioning, DimensioningConfig{});
}

TEST(NetworkPower, EmptyOpaqueNetwork) {
  Topology t = resolve_topology("J14");
  NetworkState s(t, ArchitectureConfig::of(Architecture::OpIP));
  auto p = network_power(s);
  EXPECT_GT(p.total.optical, 0.0);
  EXPECT_EQ(p.total.zr_zrplus, 0.0);
  EXPECT_DOUBLE_EQ(p.total.ip_router, 50.0 * 14);
  EXPECT_EQ(p.total.total, p.total.zr_zrplus + p.total.ip_router + p.total.optical);
}

TEST(NetworkPower, OpticalIndependentOfTraffic) {
  Topology t = resolve_topology("G17");
  for (Architecture a : kAllArchitectures) {
    auto one = provision_all(t, generate_traffic(t, TrafficScenario::builtin("TS1"), 3), a);
    auto three = provision_all(t, generate_traffic(t, TrafficScenario::builtin("TS3"), 8), a);
    EXPECT_EQ(network_power(one.state).total.optical,
              network_power(three.state).total.optical);
  }
}

TEST(NetworkPower, ModulesAndPortsAgreeWithCost) {
  Topology t = resolve_topology("J14");
  auto m = generate_traffic(t, TrafficScenario::builtin("TS2"), 4);
  for (Architecture a : kAllArchitectures) {
    auto r = provision_all(t, m, a);
    auto p = network_power(r.state);
    auto c = network_cost(r.state);
    int ports = 0;
    int b2b = 0;
    for (const auto& e : p.equipment) {
      ports += e.router_ports;
      b2b += e.b2b_zr + e.b2b_zrplus;
    }
    EXPECT_EQ(ports, c.router_ports);
    EXPECT_EQ(b2b, c.b2b_modules);
    EXPECT_EQ(c.zr_count + c.zrplus_count, c.router_ports + c.b2b_modules);
    EXPECT_DOUBLE_EQ(p.total.zr_zrplus, c.zr_count * 1.0 + c.zrplus_count * 1.3);
  }
}

TEST(NetworkCost, Weights) {
  Topology t("pair", {"A", "B"}, {{"A", "B", 100.0}});
  NetworkState empty(t, ArchitectureConfig::of(Architecture::OpIP));
  auto c0 = network_cost(empty);
  EXPECT_EQ(c0.module_cost, 0.0);
  EXPECT_EQ(c0.router_ports, 0);

  // Two ZR lightpaths and one ZR+ lightpath: 4 ZR and 2 ZR+ modules.
  NetworkState s(t, ArchitectureConfig::of(Architecture::TrIPandZR));
  auto add = [&](const TransceiverMode& mode, int channel) {
    Lightpath lp;
    lp.route = {0, 1};
    lp.mode = mode;
    lp.segments.push_back(Segment{{0, 1}, channel, 100.0});
    lp.carried.push_back({0, 100});
    return s.add_lightpath(lp);
  };
  add(cat().at(0), 0);
  const int half = add(cat().at(0), 1);
  add(cat().at(1), 2);
  s.set_attachment(half, false, Attachment::B2B);
  auto c = network_cost(s);
  EXPECT_EQ(c.zr_count, 4);
  EXPECT_EQ(c.zrplus_count, 2);
  EXPECT_DOUBLE_EQ(c.module_cost, 4 * 1.0 + 2 * 2.0);
  EXPECT_EQ(c.b2b_modules, 1);
  EXPECT_EQ(c.router_ports, 5);
}

TEST(NetworkCost, BypassNeverCostsMore) {
  Topology t = resolve_topology("G17");
  for (std::uint64_t seed : {1, 2, 3}) {
    auto m = generate_traffic(t, TrafficScenario::builtin("TS2"), seed);
    auto op = network_cost(provision_all(t, m, Architecture::OpIP).state);
    auto tr = network_cost(provision_all(t, m, Architecture::TrIP).state);
    EXPECT_LE(tr.module_cost, op.module_cost);
  }
}

}  // namespace
}  // namespace ipowdm
