#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <vector>

#include "ipowdm/experiment.hpp"
#include "ipowdm/oracle.hpp"
#include "ipowdm/transceiver.hpp"

namespace ipowdm {
namespace {

const ModeCatalog& cat() { return ModeCatalog::standard(); }

bool same_mode(const TransceiverMode& m, ModuleType module, Modulation mf, int rate) {
  return m.module == module && m.modulation == mf && m.rate_gbps == rate;
}

// Every sequence of 1..4 links drawn from a small set of lengths.
std::vector<std::vector<double>> link_lattice() {
  const double lengths[] = {50, 120, 300, 550, 600, 900, 1700, 2900};
  std::vector<std::vector<double>> out;
  std::vector<double> cur;
  auto rec = [&](auto&& self) -> void {
    if (!cur.empty()) out.push_back(cur);
    if (cur.size() == 4) return;
    for (double l : lengths) {
      cur.push_back(l);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

TEST(Catalog, StandardTable) {
  ASSERT_EQ(cat().size(), 5u);
  EXPECT_TRUE(same_mode(cat().at(0), ModuleType::ZR, Modulation::QAM16, 400));
  EXPECT_EQ(cat().at(0).reach_km, 120);
  EXPECT_EQ(cat().at(1).reach_km, 600);
  EXPECT_EQ(cat().at(2).reach_km, 1800);
  EXPECT_EQ(cat().at(3).reach_km, 3000);
  EXPECT_EQ(cat().at(4).rate_gbps, 100);
  EXPECT_EQ(cat().at(0).power_units, 1.0);
  EXPECT_EQ(cat().at(1).power_units, 1.3);
  EXPECT_EQ(cat().at(0).cost_units, 1.0);
  EXPECT_EQ(cat().at(4).cost_units, 2.0);
  EXPECT_EQ(cat().max_rate_gbps(), 400);
  EXPECT_EQ(cat().min_rate_gbps(), 100);
  EXPECT_EQ(cat().cheapest_pair_cost(), 2.0);
}

TEST(Catalog, ShippedFileMatchesStandard) {
  std::ifstream in(data_dir() + "/catalog.json");
  ASSERT_TRUE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  ModeCatalog file = parse_catalog(buf.str());
  ASSERT_EQ(file.size(), cat().size());
  for (std::size_t i = 0; i < file.size(); ++i) {
    EXPECT_EQ(file.at(static_cast<int>(i)), cat().at(static_cast<int>(i)));
  }
}

TEST(Catalog, RejectsBadModes) {
  EXPECT_THROW(ModeCatalog({}), std::invalid_argument);
  EXPECT_THROW(parse_catalog(R"({"modes":[]})"), std::invalid_argument);
  EXPECT_THROW(parse_module_type("XR"), std::invalid_argument);
  EXPECT_THROW(parse_modulation("64QAM"), std::invalid_argument);
}

TEST(FeasibleModes, ShortDistance) {
  auto m = feasible_modes(100);
  ASSERT_EQ(m.size(), 5u);
  EXPECT_TRUE(same_mode(m[0], ModuleType::ZR, Modulation::QAM16, 400));
}

TEST(FeasibleModes, MediumDistance) {
  auto m = feasible_modes(1000);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_TRUE(same_mode(m[0], ModuleType::ZRPlus, Modulation::QAM8, 300));
  EXPECT_TRUE(same_mode(m[1], ModuleType::ZRPlus, Modulation::QPSK, 200));
  EXPECT_TRUE(same_mode(m[2], ModuleType::ZRPlus, Modulation::QPSK, 100));
}

TEST(FeasibleModes, BeyondReach) {
  EXPECT_TRUE(feasible_modes(3500).empty());
  EXPECT_THROW(select_mode_max_rate(3500), NoFeasibleMode);
}

TEST(MaxRate, Examples) {
  EXPECT_TRUE(same_mode(select_mode_max_rate(500), ModuleType::ZRPlus, Modulation::QAM16, 400));
  EXPECT_TRUE(same_mode(select_mode_max_rate(120), ModuleType::ZR, Modulation::QAM16, 400));
  EXPECT_TRUE(same_mode(select_mode_max_rate(2500), ModuleType::ZRPlus, Modulation::QPSK, 200));
  EXPECT_TRUE(same_mode(select_mode_max_rate(1800), ModuleType::ZRPlus, Modulation::QAM8, 300));
}

TEST(MinChannels, Examples) {
  auto a = select_modes_min_channels(400, 500.0);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_TRUE(same_mode(a[0], ModuleType::ZRPlus, Modulation::QAM16, 400));

  auto b = select_modes_min_channels(600, 500.0);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_GE(b[0].rate_gbps + b[1].rate_gbps, 600);

  auto c = select_modes_min_channels(100, 2000.0);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_TRUE(same_mode(c[0], ModuleType::ZRPlus, Modulation::QPSK, 100));

  EXPECT_THROW(select_modes_min_channels(100, 3500.0), NoFeasibleMode);
  EXPECT_THROW(select_modes_min_channels(0, 100.0), std::invalid_argument);
}

TEST(MinChannels, SixHundredOverShortSpan) {
  // 400G+200G and 300G+300G both need two channels at equal power and no
  // spare; larger rates come first.
  auto b = select_modes_min_channels(600, 500.0);
  EXPECT_EQ(b[0].rate_gbps, 400);
  EXPECT_EQ(b[1].rate_gbps, 200);
  auto oracle_best = oracle::best_channel_choice(600, std::vector<double>{500.0});
  ASSERT_TRUE(oracle_best);
  EXPECT_EQ(oracle_best->channels, 2);
}

TEST(Regeneration, Examples) {
  const TransceiverMode qpsk = cat().at(3);
  const TransceiverMode qam16 = cat().at(1);
  std::vector<double> three{500, 500, 500};
  EXPECT_EQ(plan_regeneration(three, qpsk).regen_count(), 0u);
  auto p = plan_regeneration(three, qam16);
  EXPECT_EQ(p.regen_positions, (std::vector<std::size_t>{1, 2}));
  ASSERT_EQ(p.segments.size(), 3u);
  for (const auto& s : p.segments) EXPECT_EQ(s.length_km, 500);
  EXPECT_EQ(oracle::min_regens(three, 600), 2);
  std::vector<double> one{700};
  EXPECT_THROW(plan_regeneration(one, qam16), LinkExceedsReach);
  EXPECT_FALSE(oracle::min_regens(one, 600));
}

TEST(Regeneration, SegmentsCoverPath) {
  for (const auto& links : link_lattice()) {
    for (const auto& m : cat().modes()) {
      if (!oracle::min_regens(links, m.reach_km)) continue;
      auto p = plan_regeneration(links, m);
      ASSERT_EQ(p.segments.size(), p.regen_count() + 1);
      EXPECT_EQ(p.segments.front().first, 0u);
      EXPECT_EQ(p.segments.back().last, links.size());
      for (std::size_t i = 0; i < p.segments.size(); ++i) {
        EXPECT_LE(p.segments[i].length_km, m.reach_km);
        if (i > 0) {
          EXPECT_EQ(p.segments[i].first, p.segments[i - 1].last);
        }
      }
    }
  }
}

TEST(Regeneration, GreedyMatchesEnumeration) {
  for (const auto& links : link_lattice()) {
    for (double reach : {120.0, 600.0, 1000.0, 1800.0, 3000.0}) {
      TransceiverMode m = cat().at(1);
      m.reach_km = reach;
      auto want = oracle::min_regens(links, reach);
      if (!want) {
        EXPECT_THROW(plan_regeneration(links, m), LinkExceedsReach);
        continue;
      }
      EXPECT_EQ(static_cast<int>(plan_regeneration(links, m).regen_count()), *want);
    }
  }
}

TEST(MinChannels, MatchesEnumeration) {
  for (const auto& links : link_lattice()) {
    for (int rate = 100; rate <= 600; rate += 100) {
      auto want = oracle::best_channel_choice(rate, links);
      if (!want) {
        EXPECT_THROW(select_modes_min_channels(rate, links), NoFeasibleMode);
        continue;
      }
      auto got = select_modes_min_channels(rate, links);
      EXPECT_EQ(oracle::channel_choice_cost(got, rate, links), *want);
    }
  }
}

TEST(BundlePower, CountsRegenerators) {
  std::vector<double> links{500, 500, 500};
  std::vector<TransceiverMode> one{cat().at(1)};
  EXPECT_DOUBLE_EQ(bundle_power(one, links), 6 * 1.3);
  std::vector<TransceiverMode> two{cat().at(0), cat().at(0)};
  std::vector<double> short_link{100};
  EXPECT_DOUBLE_EQ(bundle_power(two, short_link), 4.0);
}

}  // namespace
}  // namespace ipowdm
