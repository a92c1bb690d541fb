#include "ipowdm/dimensioning.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "json.hpp"

namespace ipowdm {

namespace {

using json = nlohmann::json;

const std::pair<const char*, double PowerTable::*> kPowerKeys[] = {
    {"zr", &PowerTable::zr},
    {"zr_plus", &PowerTable::zr_plus},
    {"router_fixed", &PowerTable::router_fixed},
    {"router_modular_per_port", &PowerTable::router_modular_per_port},
    {"shelf", &PowerTable::shelf},
    {"iroadm_bidir", &PowerTable::iroadm_bidir},
    {"oa_unidir", &PowerTable::oa_unidir},
    {"awg", &PowerTable::awg},
    {"monitoring_opaque_bidir", &PowerTable::monitoring_opaque_bidir},
    {"monitoring_transparent_bidir", &PowerTable::monitoring_transparent_bidir},
};

const std::pair<const char*, int DimensioningConfig::*> kDimensioningKeys[] = {
    {"opaque_awg_per_degree", &DimensioningConfig::opaque_awg_per_degree},
    {"opaque_oa_per_degree", &DimensioningConfig::opaque_oa_per_degree},
    {"monitoring_per_degree", &DimensioningConfig::monitoring_per_degree},
    {"adb_capacity_channels", &DimensioningConfig::adb_capacity_channels},
    {"slots_iroadm", &DimensioningConfig::slots_iroadm},
    {"slots_oa", &DimensioningConfig::slots_oa},
    {"slots_monitoring", &DimensioningConfig::slots_monitoring},
    {"shelf_capacity_slots", &DimensioningConfig::shelf_capacity_slots},
};

template <typename T, typename Keys>
void read_fields(const json& obj, T& target, const Keys& keys, const char* section) {
  if (!obj.is_object()) {
    throw std::invalid_argument(std::string("plant model: ") + section + " must be an object");
  }
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const auto& [name, member] : keys) {
      if (it.key() == name) {
        using V = std::remove_reference_t<decltype(target.*member)>;
        target.*member = it.value().template get<V>();
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument(std::string("plant model: unknown key ") + section +
                                  "." + it.key());
    }
  }
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

void PowerTable::validate() const {
  for (const auto& [name, member] : kPowerKeys) {
    if (!(this->*member >= 0.0)) {
      throw std::invalid_argument(std::string("power table: ") + name + " must be >= 0");
    }
  }
}

PowerTable PowerTable::scaled(double factor) const {
  PowerTable out = *this;
  for (const auto& [name, member] : kPowerKeys) out.*member *= factor;
  return out;
}

void DimensioningConfig::validate() const {
  for (const auto& [name, member] : kDimensioningKeys) {
    if (this->*member < 0) {
      throw std::invalid_argument(std::string("dimensioning: ") + name + " must be >= 0");
    }
  }
  if (adb_capacity_channels < 1) {
    throw std::invalid_argument("dimensioning: adb_capacity_channels must be >= 1");
  }
  if (shelf_capacity_slots < 1) {
    throw std::invalid_argument("dimensioning: shelf_capacity_slots must be >= 1");
  }
}

PlantModel parse_plant_model(std::string_view document) {
  PlantModel m;
  try {
    json doc = json::parse(document);
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (it.key() == "power") {
        read_fields(it.value(), m.power, kPowerKeys, "power");
      } else if (it.key() == "dimensioning") {
        read_fields(it.value(), m.dimensioning, kDimensioningKeys, "dimensioning");
      } else {
        throw std::invalid_argument("plant model: unknown section " + it.key());
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("plant model schema: ") + e.what());
  }
  m.power.validate();
  m.dimensioning.validate();
  return m;
}

PlantModel load_plant_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open plant model " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_plant_model(buf.str());
}

std::string serialize_plant_model(const PlantModel& m) {
  json power = json::object();
  for (const auto& [name, member] : kPowerKeys) power[name] = m.power.*member;
  json dim = json::object();
  for (const auto& [name, member] : kDimensioningKeys) dim[name] = m.dimensioning.*member;
  json doc{{"power", power}, {"dimensioning", dim}};
  return doc.dump(2) + "\n";
}

NodeEquipment node_plant(int degree, const ArchitectureConfig& arch, int channel_count,
                         const DimensioningConfig& cfg) {
  NodeEquipment e;
  e.router_chassis = 1;
  e.monitoring_units = cfg.monitoring_per_degree * degree;
  if (!arch.optical_bypass) {
    e.monitoring = MonitoringKind::Opaque;
    e.awg = cfg.opaque_awg_per_degree * degree;
    e.oa = cfg.opaque_oa_per_degree * degree;
  } else {
    e.monitoring = MonitoringKind::Transparent;
    e.iroadm = degree;
    e.adb = std::max(1, ceil_div(degree * channel_count, cfg.adb_capacity_channels));
    e.awg = e.adb;
    e.oa = e.adb;
  }
  const int slots = e.iroadm * cfg.slots_iroadm + e.oa * cfg.slots_oa +
                    e.monitoring_units * cfg.slots_monitoring;
  const bool housed = e.iroadm + e.oa + e.monitoring_units > 0;
  e.shelves = housed ? std::max(1, ceil_div(slots, cfg.shelf_capacity_slots)) : 0;
  return e;
}

NodeEquipment dimension_node(const NetworkState& state, NodeIndex node,
                             const DimensioningConfig& cfg) {
  const Topology& t = state.topology();
  NodeEquipment e = node_plant(t.degree(node), state.architecture(), state.channel_count(), cfg);
  for (const Lightpath& lp : state.lightpaths()) {
    const bool zr = lp.mode.module == ModuleType::ZR;
    auto terminate = [&](Attachment a) {
      if (a == Attachment::RouterPort) {
        ++(zr ? e.plugged_zr : e.plugged_zrplus);
      } else {
        ++(zr ? e.b2b_zr : e.b2b_zrplus);
      }
    };
    if (lp.src() == node) terminate(lp.src_attachment);
    if (lp.dst() == node) terminate(lp.dst_attachment);
    for (NodeIndex r : lp.regen_nodes()) {
      if (r == node) (zr ? e.b2b_zr : e.b2b_zrplus) += 2;
    }
  }
  e.router_ports = e.plugged_zr + e.plugged_zrplus;
  return e;
}

PowerBreakdown power_of(const NodeEquipment& e, const PowerTable& pt) {
  PowerBreakdown p;
  p.zr_zrplus = (e.plugged_zr + e.b2b_zr) * pt.zr + (e.plugged_zrplus + e.b2b_zrplus) * pt.zr_plus;
  p.ip_router = e.router_chassis * pt.router_fixed + e.router_ports * pt.router_modular_per_port;
  const double monitoring = e.monitoring == MonitoringKind::Opaque
                                ? pt.monitoring_opaque_bidir
                                : pt.monitoring_transparent_bidir;
  p.optical = e.shelves * pt.shelf + e.iroadm * pt.iroadm_bidir + e.oa * pt.oa_unidir +
              e.awg * pt.awg + e.monitoring_units * monitoring;
  p.total = p.zr_zrplus + p.ip_router + p.optical;
  return p;
}

NetworkPower network_power(const NetworkState& state, const PowerTable& pt,
                           const DimensioningConfig& cfg) {
  NetworkPower out;
  const auto n = static_cast<NodeIndex>(state.topology().node_count());
  for (NodeIndex v = 0; v < n; ++v) {
    out.equipment.push_back(dimension_node(state, v, cfg));
    out.nodes.push_back(power_of(out.equipment.back(), pt));
    out.total.zr_zrplus += out.nodes.back().zr_zrplus;
    out.total.ip_router += out.nodes.back().ip_router;
    out.total.optical += out.nodes.back().optical;
  }
  out.total.total = out.total.zr_zrplus + out.total.ip_router + out.total.optical;
  return out;
}

CostReport network_cost(const NetworkState& state) {
  CostReport c;
  for (const Lightpath& lp : state.lightpaths()) {
    const int modules = lp.module_count();
    int b2b = 2 * static_cast<int>(lp.regen_plan.regen_count());
    b2b += lp.src_attachment == Attachment::B2B;
    b2b += lp.dst_attachment == Attachment::B2B;
    c.module_cost += modules * lp.mode.cost_units;
    c.router_ports += modules - b2b;
    c.b2b_modules += b2b;
    (lp.mode.module == ModuleType::ZR ? c.zr_count : c.zrplus_count) += modules;
  }
  return c;
}

std::string equipment_to_csv(const Topology& t, const NetworkPower& p) {
  std::string out =
      "node,degree,router_chassis,router_ports,plugged_zr,plugged_zrplus,b2b_zr,b2b_zrplus,"
      "awg,iroadm,oa,adb,monitoring_units,shelves,power_zr,power_ip,power_optical,power_total\n";
  for (std::size_t v = 0; v < p.equipment.size(); ++v) {
    const NodeEquipment& e = p.equipment[v];
    const PowerBreakdown& b = p.nodes[v];
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{:.4f},{:.4f},{:.4f},{:.4f}\n",
                       t.node_name(static_cast<NodeIndex>(v)),
                       t.degree(static_cast<NodeIndex>(v)), e.router_chassis, e.router_ports,
                       e.plugged_zr, e.plugged_zrplus, e.b2b_zr, e.b2b_zrplus, e.awg, e.iroadm,
                       e.oa, e.adb, e.monitoring_units, e.shelves, b.zr_zrplus, b.ip_router,
                       b.optical, b.total);
  }
  return out;
}

}  // namespace ipowdm
