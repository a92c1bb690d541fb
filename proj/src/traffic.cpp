#include "ipowdm/traffic.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ipowdm {

namespace {
using json = nlohmann::json;
}

int rate_class_index(int rate_gbps) {
  for (std::size_t i = 0; i < kRateClassesGbps.size(); ++i) {
    if (kRateClassesGbps[i] == rate_gbps) return static_cast<int>(i);
  }
  throw TrafficError("rate " + std::to_string(rate_gbps) +
                     " Gb/s is not a demand rate class");
}

void TrafficScenario::validate() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0) || !std::isfinite(weights[i])) {
      throw TrafficError("scenario " + name + ": weight for " +
                         std::to_string(kRateClassesGbps[i]) +
                         " Gb/s must be >= 0");
    }
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream msg;
    msg << "scenario " << name << ": weights sum to " << sum << ", expected 1";
    throw TrafficError(msg.str());
  }
}

TrafficScenario TrafficScenario::builtin(std::string_view name) {
  // Mirrors data/scenarios/ts*.json.
  if (name == "TS1") return {"TS1", {0.40, 0.25, 0.15, 0.10, 0.06, 0.04}};
  if (name == "TS2") return {"TS2", {0.35, 0.25, 0.17, 0.11, 0.07, 0.05}};
  if (name == "TS3") return {"TS3", {0.30, 0.25, 0.19, 0.12, 0.08, 0.06}};
  throw TrafficError("unknown built-in scenario " + std::string(name));
}

std::vector<std::string> TrafficScenario::builtin_names() {
  return {"TS1", "TS2", "TS3"};
}

RateSampler::RateSampler(const TrafficScenario& scenario, std::uint64_t seed)
    : engine_(seed) {
  scenario.validate();
  double acc = 0.0;
  for (std::size_t i = 0; i < cumulative_.size(); ++i) {
    acc += scenario.weights[i];
    cumulative_[i] = acc;
  }
}

int RateSampler::next() {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  int last_positive = 0;
  for (std::size_t i = 0; i < cumulative_.size(); ++i) {
    const double w = cumulative_[i] - (i ? cumulative_[i - 1] : 0.0);
    if (w > 0.0) last_positive = static_cast<int>(i);
    if (w > 0.0 && u < cumulative_[i]) return kRateClassesGbps[i];
  }
  // u landed in the rounding gap above the last cumulative weight.
  return kRateClassesGbps[last_positive];
}

TrafficMatrix generate_traffic(const Topology& t, const TrafficScenario& s,
                               std::uint64_t seed) {
  RateSampler sampler(s, seed);
  TrafficMatrix m;
  m.seed = seed;
  m.scenario = s;
  const auto n = static_cast<NodeIndex>(t.node_count());
  m.demands.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (NodeIndex src = 0; src < n; ++src) {
    for (NodeIndex dst = 0; dst < n; ++dst) {
      if (src == dst) continue;
      m.demands.push_back(Demand{src, dst, sampler.next()});
    }
  }
  return m;
}

TrafficScenario parse_scenario(std::string_view document) {
  TrafficScenario s;
  try {
    json doc = json::parse(document);
    s.name = doc.value("name", std::string("custom"));
    const json& w = doc.at("weights");
    for (auto it = w.begin(); it != w.end(); ++it) {
      int rate = std::stoi(it.key());
      s.weights[rate_class_index(rate)] = it.value().get<double>();
    }
  } catch (const json::exception& e) {
    throw TrafficError(std::string("scenario schema: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw TrafficError("scenario schema: weight keys must be rates in Gb/s");
  }
  s.validate();
  return s;
}

TrafficScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TrafficError("cannot open scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const TrafficScenario& s) {
  json w = json::object();
  for (std::size_t i = 0; i < kRateClassesGbps.size(); ++i) {
    w[std::to_string(kRateClassesGbps[i])] = s.weights[i];
  }
  json doc{{"name", s.name}, {"weights", w}};
  return doc.dump(2) + "\n";
}

std::string traffic_to_csv(const Topology& t, const TrafficMatrix& m) {
  std::string out = "src,dst,rate_gbps\n";
  for (const Demand& d : m.demands) {
    out += t.node_name(d.src);
    out += ',';
    out += t.node_name(d.dst);
    out += ',';
    out += std::to_string(d.rate_gbps);
    out += '\n';
  }
  return out;
}

std::string traffic_to_json(const Topology& t, const TrafficMatrix& m) {
  json demands = json::array();
  for (const Demand& d : m.demands) {
    demands.push_back({{"src", t.node_name(d.src)},
                       {"dst", t.node_name(d.dst)},
                       {"rate_gbps", d.rate_gbps}});
  }
  json doc{{"topology", t.name()},
           {"scenario", m.scenario.name},
           {"seed", m.seed},
           {"demands", demands}};
  return doc.dump(2) + "\n";
}

}  // namespace ipowdm
