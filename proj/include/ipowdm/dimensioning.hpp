#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ipowdm/rmsa.hpp"
#include "ipowdm/topology.hpp"

namespace ipowdm {

// Normalized power per device.
struct PowerTable {
  double zr = 1.0;
  double zr_plus = 1.3;
  double router_fixed = 50.0;
  double router_modular_per_port = 4.0;
  double shelf = 20.0;
  double iroadm_bidir = 4.1;
  double oa_unidir = 1.7;
  double awg = 0.3;
  double monitoring_opaque_bidir = 0.3;
  double monitoring_transparent_bidir = 1.5;

  void validate() const;
  PowerTable scaled(double factor) const;
  bool operator==(const PowerTable&) const = default;
};

struct DimensioningConfig {
  // Opaque terminal per degree.
  int opaque_awg_per_degree = 2;
  int opaque_oa_per_degree = 2;
  int monitoring_per_degree = 1;
  // Add/drop banks are sized for the node's full add/drop capacity,
  // degree * channel_count channels, not for the traffic actually planned.
  int adb_capacity_channels = 25;
  // Shelf slot units. AWGs sit outside the shelf.
  int slots_iroadm = 3;
  int slots_oa = 1;
  int slots_monitoring = 0;
  int shelf_capacity_slots = 15;

  void validate() const;
  bool operator==(const DimensioningConfig&) const = default;
};

struct PlantModel {
  PowerTable power;
  DimensioningConfig dimensioning;
};

// {"power": {"zr": 1, ...}, "dimensioning": {"adb_capacity_channels": 50, ...}};
// missing keys keep their defaults, unknown keys are rejected.
PlantModel parse_plant_model(std::string_view document);
PlantModel load_plant_model(const std::string& path);
std::string serialize_plant_model(const PlantModel& m);

enum class MonitoringKind { Opaque, Transparent };

struct NodeEquipment {
  int router_chassis = 0;
  int router_ports = 0;
  int plugged_zr = 0;
  int plugged_zrplus = 0;
  int b2b_zr = 0;
  int b2b_zrplus = 0;
  int awg = 0;
  int iroadm = 0;
  int oa = 0;
  int adb = 0;
  int monitoring_units = 0;
  MonitoringKind monitoring = MonitoringKind::Opaque;
  int shelves = 0;

  bool operator==(const NodeEquipment&) const = default;
};

struct PowerBreakdown {
  double zr_zrplus = 0.0;
  double ip_router = 0.0;
  double optical = 0.0;
  double total = 0.0;

  bool operator==(const PowerBreakdown&) const = default;
};

// Equipment from the node's degree and the architecture alone, no modules.
NodeEquipment node_plant(int degree, const ArchitectureConfig& arch,
                         int channel_count, const DimensioningConfig& cfg = {});

NodeEquipment dimension_node(const NetworkState& state, NodeIndex node,
                             const DimensioningConfig& cfg = {});

PowerBreakdown power_of(const NodeEquipment& e, const PowerTable& pt = {});

struct NetworkPower {
  std::vector<NodeEquipment> equipment;  // by node index
  std::vector<PowerBreakdown> nodes;     // by node index
  PowerBreakdown total;
};

NetworkPower network_power(const NetworkState& state, const PowerTable& pt = {},
                           const DimensioningConfig& cfg = {});

struct CostReport {
  double module_cost = 0.0;  // includes b2b modules
  int router_ports = 0;
  int zr_count = 0;
  int zrplus_count = 0;
  int b2b_modules = 0;
};

CostReport network_cost(const NetworkState& state);

std::string equipment_to_csv(const Topology& t, const NetworkPower& p);

}  // namespace ipowdm
