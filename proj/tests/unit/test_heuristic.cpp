#include <gtest/gtest.h>

#include <algorithm>

#include "cimdse/costmodel.hpp"
#include "cimdse/mapper.hpp"
#include "oracle.hpp"

namespace cimdse {
namespace {

SystemConfig rf_config() {
  const auto p = testing::fixture_primitive();
  return build_config(default_template(), Placement::CimRf, &p);
}

TEST(Heuristic, BestIsValidAndSeeded) {
  const GemmShape g(96, 128, 320);
  for (const auto& cfg : {default_template(), rf_config()}) {
    HeuristicOptions o;
    o.seed = 5;
    o.victory_limit = 200;
    const auto a = heuristic_search(g, cfg, o);
    ASSERT_TRUE(a.best.has_value()) << cfg.name;
    EXPECT_TRUE(validate_mapping(*a.best, g, cfg).empty());
    EXPECT_GE(a.samples, a.valid_samples);
    const auto b = heuristic_search(g, cfg, o);
    EXPECT_EQ(*a.best, *b.best);
    EXPECT_EQ(a.samples, b.samples);
  }
}

TEST(Heuristic, LimitsStopTheSearch) {
  const GemmShape g(64, 64, 64);
  HeuristicOptions o;
  o.invalid_limit = 0;
  const auto none = heuristic_search(g, rf_config(), o);
  EXPECT_FALSE(none.best.has_value());
  EXPECT_EQ(none.samples, 0u);

  o.invalid_limit = 100000;
  o.victory_limit = 0;
  o.max_samples = 37;
  EXPECT_EQ(heuristic_search(g, rf_config(), o).samples, 37u);

  o.max_samples = 0;
  o.victory_limit = 10;
  const auto r = heuristic_search(g, default_template(), o);
  EXPECT_GE(r.valid_samples, 10u);
}

TEST(Heuristic, LongerSearchNeverWorse) {
  const GemmShape g(200, 48, 1000);
  const auto cfg = rf_config();
  double prev = 0;
  for (std::uint64_t cap : {50, 200, 1000, 4000}) {
    HeuristicOptions o;
    o.victory_limit = 0;
    o.max_samples = cap;
    const auto r = heuristic_search(g, cfg, o);
    ASSERT_TRUE(r.best.has_value());
    const double eff = evaluate_mapping(*r.best, g, cfg).tops_per_w;
    EXPECT_GE(eff, prev) << cap;
    prev = eff;
  }
}

TEST(Heuristic, FindsOptimumOfTinySpace) {
  // Single mapped level: the whole space is spatial divisors x orders.
  SystemConfig cfg;
  cfg.name = "flat";
  cfg.levels = {{"DRAM", std::nullopt, Rational(32), Energy::from_pj(1), 1},
                {"PEBUF", 1024, Rational(1024), Energy::from_pj(1), 1}};
  const GemmShape g(2, 4, 2);
  double best = 0;
  LoopOrder order{Dim::M, Dim::N, Dim::K};
  do {
    for (std::int64_t sm : {1, 2}) {
      for (std::int64_t sn : {1, 2, 4}) {
        for (std::int64_t sk : {1, 2}) {
          Mapping m;
          m.spatial = {sm, sn, sk};
          m.nests = {{"DRAM", {2 / sm, 4 / sn, 2 / sk}, order}};
          if (!validate_mapping(m, g, cfg).empty()) continue;
          best = std::max(best, evaluate_mapping(m, g, cfg).tops_per_w);
        }
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  ASSERT_GT(best, 0);

  HeuristicOptions o;
  o.victory_limit = 0;
  o.max_samples = 3000;
  const auto r = heuristic_search(g, cfg, o);
  ASSERT_TRUE(r.best.has_value());
  EXPECT_DOUBLE_EQ(evaluate_mapping(*r.best, g, cfg).tops_per_w, best);
}

}  // namespace
}  // namespace cimdse
