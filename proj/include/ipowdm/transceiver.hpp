#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ipowdm {

enum class ModuleType { ZR, ZRPlus };
enum class Modulation { QPSK, QAM8, QAM16 };

std::string_view to_string(ModuleType m);
std::string_view to_string(Modulation m);
ModuleType parse_module_type(std::string_view s);
Modulation parse_modulation(std::string_view s);

struct TransceiverMode {
  int id = 0;  // position in its catalog
  ModuleType module = ModuleType::ZR;
  Modulation modulation = Modulation::QAM16;
  double reach_km = 0.0;
  int rate_gbps = 0;
  double power_units = 0.0;  // per pluggable
  double cost_units = 0.0;   // per pluggable

  bool operator==(const TransceiverMode&) const = default;
};

std::string describe(const TransceiverMode& m);

class NoFeasibleMode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LinkExceedsReach : public std::runtime_error {
 public:
  LinkExceedsReach(std::size_t link_index, double length_km, double reach_km);
  std::size_t link_index() const { return link_index_; }

 private:
  std::size_t link_index_;
};

class ModeCatalog {
 public:
  explicit ModeCatalog(std::vector<TransceiverMode> modes);

  // ZR 16QAM 120 km 400G; ZR+ 16QAM 600 km 400G; ZR+ 8QAM 1800 km 300G;
  // ZR+ QPSK 3000 km 200G; ZR+ QPSK 3000 km 100G. ZR draws 1 power unit and
  // costs 1, ZR+ draws 1.3 and costs 2.
  static const ModeCatalog& standard();

  std::span<const TransceiverMode> modes() const { return modes_; }
  const TransceiverMode& at(int id) const { return modes_.at(id); }
  std::size_t size() const { return modes_.size(); }

  int max_rate_gbps() const;
  int min_rate_gbps() const;
  double max_reach_km() const;
  // Cost of the cheapest mode times two (one pluggable per end).
  double cheapest_pair_cost() const;

 private:
  std::vector<TransceiverMode> modes_;
};

// {"modes": [{"module": "ZR", "modulation": "16QAM", "reach_km": 120,
//   "rate_gbps": 400}, ...], "modules": {"ZR": {"power": 1, "cost": 1}, ...}}
ModeCatalog parse_catalog(std::string_view document);

// Modes with reach >= distance, ordered by (rate desc, power asc).
std::vector<TransceiverMode> feasible_modes(
    double distance_km, const ModeCatalog& catalog = ModeCatalog::standard());

TransceiverMode select_mode_max_rate(
    double distance_km, const ModeCatalog& catalog = ModeCatalog::standard());

// Regeneration placement along a path, in node positions (position i is the
// node before link i).
struct RegenSegment {
  std::size_t first = 0;
  std::size_t last = 0;
  double length_km = 0.0;

  bool operator==(const RegenSegment&) const = default;
};

enum class RegenKind { IP, B2B };
std::string_view to_string(RegenKind k);

struct RegenPlan {
  std::vector<RegenSegment> segments;
  std::vector<std::size_t> regen_positions;  // interior, ascending

  std::size_t regen_count() const { return regen_positions.size(); }
  bool operator==(const RegenPlan&) const = default;
};

// Greedy farthest-reach placement, which is minimal for interval covering
// on a line. Throws LinkExceedsReach if one link alone is beyond reach.
RegenPlan plan_regeneration(std::span<const double> link_lengths_km,
                            const TransceiverMode& mode);

// Parallel channels whose rates sum to >= rate_gbps, picked by
// (channel count, regenerators on the path, total power, spare capacity,
// larger rates first). Every module in the result can cover the path with
// regeneration. Sorted by rate descending.
std::vector<TransceiverMode> select_modes_min_channels(
    int rate_gbps, std::span<const double> link_lengths_km,
    const ModeCatalog& catalog = ModeCatalog::standard());

// Single transparent span of the given length.
std::vector<TransceiverMode> select_modes_min_channels(
    int rate_gbps, double distance_km,
    const ModeCatalog& catalog = ModeCatalog::standard());

// Total pluggable power of a set of parallel lightpaths on a path:
// 2 modules per lightpath plus 2 per regenerator.
double bundle_power(std::span<const TransceiverMode> modes,
                    std::span<const double> link_lengths_km);

}  // namespace ipowdm
