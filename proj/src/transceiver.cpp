#include "ipowdm/transceiver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace ipowdm {

std::string_view to_string(ModuleType m) {
  return m == ModuleType::ZR ? "ZR" : "ZR+";
}

std::string_view to_string(Modulation m) {
  switch (m) {
    case Modulation::QPSK: return "QPSK";
    case Modulation::QAM8: return "8QAM";
    case Modulation::QAM16: return "16QAM";
  }
  return "?";
}

std::string_view to_string(RegenKind k) { return k == RegenKind::IP ? "ip" : "b2b"; }

ModuleType parse_module_type(std::string_view s) {
  if (s == "ZR") return ModuleType::ZR;
  if (s == "ZR+" || s == "ZRplus" || s == "ZRPlus") return ModuleType::ZRPlus;
  throw std::invalid_argument("unknown module type " + std::string(s));
}

Modulation parse_modulation(std::string_view s) {
  if (s == "QPSK") return Modulation::QPSK;
  if (s == "8QAM") return Modulation::QAM8;
  if (s == "16QAM") return Modulation::QAM16;
  throw std::invalid_argument("unknown modulation " + std::string(s));
}

std::string describe(const TransceiverMode& m) {
  std::ostringstream out;
  out << to_string(m.module) << ' ' << to_string(m.modulation) << ' '
      << m.rate_gbps << "G/" << m.reach_km << "km";
  return out.str();
}

LinkExceedsReach::LinkExceedsReach(std::size_t link_index, double length_km,
                                   double reach_km)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "link " << link_index << " (" << length_km
            << " km) exceeds mode reach " << reach_km << " km";
        return msg.str();
      }()),
      link_index_(link_index) {}

ModeCatalog::ModeCatalog(std::vector<TransceiverMode> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw std::invalid_argument("mode catalog is empty");
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    TransceiverMode& m = modes_[i];
    m.id = static_cast<int>(i);
    if (m.rate_gbps <= 0 || !(m.reach_km > 0) || m.power_units < 0 || m.cost_units < 0) {
      throw std::invalid_argument("invalid catalog entry " + describe(m));
    }
  }
}

const ModeCatalog& ModeCatalog::standard() {
  static const ModeCatalog catalog({
      {0, ModuleType::ZR, Modulation::QAM16, 120, 400, 1.0, 1.0},
      {1, ModuleType::ZRPlus, Modulation::QAM16, 600, 400, 1.3, 2.0},
      {2, ModuleType::ZRPlus, Modulation::QAM8, 1800, 300, 1.3, 2.0},
      {3, ModuleType::ZRPlus, Modulation::QPSK, 3000, 200, 1.3, 2.0},
      {4, ModuleType::ZRPlus, Modulation::QPSK, 3000, 100, 1.3, 2.0},
  });
  return catalog;
}

int ModeCatalog::max_rate_gbps() const {
  int best = 0;
  for (const auto& m : modes_) best = std::max(best, m.rate_gbps);
  return best;
}

int ModeCatalog::min_rate_gbps() const {
  int best = modes_.front().rate_gbps;
  for (const auto& m : modes_) best = std::min(best, m.rate_gbps);
  return best;
}

double ModeCatalog::max_reach_km() const {
  double best = 0.0;
  for (const auto& m : modes_) best = std::max(best, m.reach_km);
  return best;
}

double ModeCatalog::cheapest_pair_cost() const {
  double best = modes_.front().cost_units;
  for (const auto& m : modes_) best = std::min(best, m.cost_units);
  return 2.0 * best;
}

ModeCatalog parse_catalog(std::string_view document) {
  using json = nlohmann::json;
  try {
    json doc = json::parse(document);
    const json& modules = doc.at("modules");
    std::vector<TransceiverMode> modes;
    for (const json& jm : doc.at("modes")) {
      TransceiverMode m;
      const std::string module = jm.at("module").get<std::string>();
      m.module = parse_module_type(module);
      m.modulation = parse_modulation(jm.at("modulation").get<std::string>());
      m.reach_km = jm.at("reach_km").get<double>();
      m.rate_gbps = jm.at("rate_gbps").get<int>();
      const json& spec = modules.at(std::string(to_string(m.module)));
      m.power_units = spec.at("power").get<double>();
      m.cost_units = spec.at("cost").get<double>();
      modes.push_back(m);
    }
    return ModeCatalog(std::move(modes));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("catalog schema: ") + e.what());
  }
}

std::vector<TransceiverMode> feasible_modes(double distance_km,
                                            const ModeCatalog& catalog) {
  if (distance_km < 0) throw std::invalid_argument("negative distance");
  std::vector<TransceiverMode> out;
  for (const auto& m : catalog.modes()) {
    if (m.reach_km >= distance_km) out.push_back(m);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TransceiverMode& a, const TransceiverMode& b) {
                     if (a.rate_gbps != b.rate_gbps) return a.rate_gbps > b.rate_gbps;
                     return a.power_units < b.power_units;
                   });
  return out;
}

TransceiverMode select_mode_max_rate(double distance_km,
                                     const ModeCatalog& catalog) {
  auto modes = feasible_modes(distance_km, catalog);
  if (modes.empty()) {
    std::ostringstream msg;
    msg << "no transceiver mode reaches " << distance_km << " km";
    throw NoFeasibleMode(msg.str());
  }
  return modes.front();
}

RegenPlan plan_regeneration(std::span<const double> link_lengths_km,
                            const TransceiverMode& mode) {
  RegenPlan plan;
  std::size_t start = 0;
  double running = 0.0;
  for (std::size_t i = 0; i < link_lengths_km.size(); ++i) {
    const double len = link_lengths_km[i];
    if (len > mode.reach_km) throw LinkExceedsReach(i, len, mode.reach_km);
    if (running + len > mode.reach_km) {
      plan.segments.push_back({start, i, running});
      plan.regen_positions.push_back(i);
      start = i;
      running = len;
    } else {
      running += len;
    }
  }
  plan.segments.push_back({start, link_lengths_km.size(), running});
  return plan;
}

double bundle_power(std::span<const TransceiverMode> modes,
                    std::span<const double> link_lengths_km) {
  double total = 0.0;
  for (const auto& m : modes) {
    const auto regens = plan_regeneration(link_lengths_km, m).regen_count();
    total += static_cast<double>(2 + 2 * regens) * m.power_units;
  }
  return total;
}

std::vector<TransceiverMode> select_modes_min_channels(
    int rate_gbps, std::span<const double> link_lengths_km,
    const ModeCatalog& catalog) {
  if (rate_gbps <= 0) throw std::invalid_argument("rate must be positive");
  double longest = 0.0;
  for (double len : link_lengths_km) longest = std::max(longest, len);

  struct Option {
    const TransceiverMode* mode;
    std::size_t regens;
  };
  std::vector<Option> usable;
  for (const auto& m : catalog.modes()) {
    if (m.reach_km >= longest) {
      usable.push_back({&m, plan_regeneration(link_lengths_km, m).regen_count()});
    }
  }
  if (usable.empty()) {
    std::ostringstream msg;
    msg << "no transceiver mode covers a " << longest << " km link";
    throw NoFeasibleMode(msg.str());
  }

  using Key = std::tuple<std::size_t, std::size_t, long long, int, std::vector<int>>;
  std::optional<Key> best_key;
  std::vector<std::size_t> best;

  const int min_rate = catalog.min_rate_gbps();
  const std::size_t max_channels =
      static_cast<std::size_t>((rate_gbps + min_rate - 1) / min_rate);

  // Non-decreasing index sequences enumerate each multiset once.
  std::vector<std::size_t> pick;
  auto visit = [&](auto&& self, std::size_t from, int capacity) -> void {
    if (capacity >= rate_gbps) {
      std::size_t regens = 0;
      double power = 0.0;
      std::vector<int> rates;
      for (std::size_t idx : pick) {
        regens += usable[idx].regens;
        power += static_cast<double>(2 + 2 * usable[idx].regens) *
                 usable[idx].mode->power_units;
        rates.push_back(-usable[idx].mode->rate_gbps);
      }
      std::sort(rates.begin(), rates.end());
      // Quantized so summation order cannot split ties.
      Key key{pick.size(), regens, std::llround(power * 1e6),
              capacity - rate_gbps, rates};
      if (!best_key || key < *best_key) {
        best_key = std::move(key);
        best = pick;
      }
      return;
    }
    if (pick.size() == max_channels) return;
    for (std::size_t i = from; i < usable.size(); ++i) {
      pick.push_back(i);
      self(self, i, capacity + usable[i].mode->rate_gbps);
      pick.pop_back();
    }
  };
  visit(visit, 0, 0);

  std::vector<TransceiverMode> out;
  for (std::size_t idx : best) out.push_back(*usable[idx].mode);
  std::stable_sort(out.begin(), out.end(),
                   [](const TransceiverMode& a, const TransceiverMode& b) {
                     if (a.rate_gbps != b.rate_gbps) return a.rate_gbps > b.rate_gbps;
                     return a.power_units < b.power_units;
                   });
  return out;
}

std::vector<TransceiverMode> select_modes_min_channels(
    int rate_gbps, double distance_km, const ModeCatalog& catalog) {
  const double links[] = {distance_km};
  return select_modes_min_channels(rate_gbps, links, catalog);
}

}  // namespace ipowdm
