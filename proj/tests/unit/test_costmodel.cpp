#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cimdse/costmodel.hpp"
#include "cimdse/error.hpp"
#include "cimdse/mapper.hpp"
#include "oracle.hpp"

namespace cimdse {
namespace {

const std::string kData = CIMDSE_TEST_DATA_DIR;

std::vector<SystemConfig> configs() {
  const auto p = testing::fixture_primitive();
  const auto t = default_template();
  return {t, build_config(t, Placement::CimRf, &p), build_config(t, Placement::CimSmemConfigA, &p),
          build_config(t, Placement::CimSmemConfigB, &p)};
}

// DRAM feeding the PE buffer directly: a single mapped nest.
SystemConfig flat_config() {
  SystemConfig cfg;
  cfg.name = "flat";
  cfg.levels = {{"DRAM", std::nullopt, Rational(32), Energy::from_pj(1), 1},
                {"PEBUF", 1024, Rational(1024), Energy::from_pj(1), 1}};
  cfg.validate();
  return cfg;
}

Mapping flat_mapping(LoopOrder order) {
  Mapping m;
  m.nests = {{"DRAM", {2, 2, 2}, order}};
  return m;
}

void expect_same_counts(const AccessCounts& model, const std::vector<LevelAccesses>& sim, const std::string& what) {
  ASSERT_EQ(model.levels.size(), sim.size());
  for (std::size_t l = 0; l < sim.size(); ++l) {
    EXPECT_EQ(model.levels[l], sim[l]) << what << " level " << sim[l].level;
  }
}

TEST(CountAccesses, FlatNestOrdersDiffer) {
  const GemmShape g(2, 2, 2);
  const auto cfg = flat_config();
  // M outermost, N innermost
  const auto mkn = count_accesses(flat_mapping({Dim::M, Dim::K, Dim::N}), g, cfg);
  const auto& d1 = mkn.at("DRAM");
  EXPECT_EQ(d1[Tensor::A].reads, 4u);
  EXPECT_EQ(d1[Tensor::B].reads, 8u);
  EXPECT_EQ(d1[Tensor::Z].writes, 8u);
  EXPECT_EQ(d1[Tensor::Z].reads, 4u);
  // K innermost: outputs stay put
  const auto mnk = count_accesses(flat_mapping({Dim::M, Dim::N, Dim::K}), g, cfg);
  const auto& d2 = mnk.at("DRAM");
  EXPECT_EQ(d2[Tensor::A].reads, 8u);
  EXPECT_EQ(d2[Tensor::B].reads, 8u);
  EXPECT_EQ(d2[Tensor::Z].writes, 4u);
  EXPECT_EQ(d2[Tensor::Z].reads, 0u);

  expect_same_counts(mkn, testing::simulate_accesses(flat_mapping({Dim::M, Dim::K, Dim::N}), g, cfg), "MKN");
  expect_same_counts(mnk, testing::simulate_accesses(flat_mapping({Dim::M, Dim::N, Dim::K}), g, cfg), "MNK");
}

TEST(CountAccesses, UnitFactorsMoveEachTensorOnce) {
  const GemmShape g(4, 16, 16);
  const auto cfg = default_template();
  Mapping m;
  m.spatial = {4, 16, 16};
  const LoopOrder mnk{Dim::M, Dim::N, Dim::K};
  m.nests = {{"RF", {}, mnk}, {"SMEM", {}, mnk}, {"DRAM", {}, mnk}};
  ASSERT_TRUE(validate_mapping(m, g, cfg).empty());
  const auto c = count_accesses(m, g, cfg);
  EXPECT_EQ(c.at("DRAM")[Tensor::A].reads, 64u);
  EXPECT_EQ(c.at("DRAM")[Tensor::B].reads, 256u);
  EXPECT_EQ(c.at("DRAM")[Tensor::Z].writes, 64u);
  EXPECT_EQ(c.at("DRAM")[Tensor::Z].reads, 0u);
  EXPECT_EQ(c.reductions, 0u);
}

TEST(CountAccesses, ReductionsCountOuterKIterations) {
  const GemmShape g(2, 2, 2);
  EXPECT_EQ(count_accesses(flat_mapping({Dim::M, Dim::N, Dim::K}), g, flat_config()).reductions, 4u);
  const auto cfg = configs()[1];
  const GemmShape small(64, 32, 256);
  const auto m = map_gemm(small, cfg);
  ASSERT_EQ(m.temporal(Dim::K), 1);  // K fits the arrays
  EXPECT_EQ(count_accesses(m, small, cfg).reductions, 0u);
}

TEST(CountAccesses, MatchesLoopSimulation) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> dim(1, 16);
  auto cfgs = configs();
  cfgs.push_back(flat_config());
  int checked = 0;
  for (int i = 0; i < 150; ++i) {
    const GemmShape g(dim(rng), dim(rng), dim(rng));
    for (const auto& cfg : cfgs) {
      for (int j = 0; j < 5; ++j) {
        const auto m = testing::random_valid_mapping(rng, g, cfg);
        ASSERT_TRUE(m.has_value()) << to_string(g) << " " << cfg.name;
        expect_same_counts(count_accesses(*m, g, cfg), testing::simulate_accesses(*m, g, cfg),
                           to_string(g) + " " + cfg.name + " " + mapping_to_json(*m));
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 150 * 5 * 5);
}

TEST(CountAccesses, RejectsForeignMapping) {
  Mapping m;
  m.nests = {{"DRAM", {}, {}}};
  EXPECT_THROW(count_accesses(m, GemmShape(1, 1, 1), default_template()), InvariantError);
  EXPECT_THROW(evaluate_mapping(m, GemmShape(1, 1, 1), default_template()), InvariantError);
}

TEST(Energy, SingleMacBaselineHandSum) {
  const GemmShape g(1, 1, 1);
  const auto cfg = default_template();
  const auto m = evaluate(g, cfg);
  // Per element: A and B travel DRAM -> SMEM -> RF -> PEBUF, Z the reverse.
  // DRAM 3 touches, SMEM 6, RF 6, PEBUF 3; 64-bit access words above the PE
  // buffer, each level rounded to the nearest fJ.
  const std::int64_t dram = 3 * 512000 / 8;          // 192000
  const std::int64_t smem = (6 * 124690 + 4) / 8;    // 93517.5 -> 93518
  const std::int64_t rf = (6 * 11470 + 4) / 8;       // 8602.5 -> 8603
  const std::int64_t pe = 3 * 20;
  EXPECT_EQ(m.energy.total, Energy::from_fj(dram + smem + rf + pe + 260));
  EXPECT_EQ(m.energy.mac, Energy::from_fj(260));
  EXPECT_EQ(m.energy.reduction, Energy());
  EXPECT_EQ(m.cycles.total_cycles, 1u);
}

TEST(Energy, ComponentsSumToTotal) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> e(4, 13);
  for (const auto& cfg : configs()) {
    for (int i = 0; i < 50; ++i) {
      const GemmShape g(1LL << e(rng), 1LL << e(rng), 1LL << e(rng));
      const auto m = evaluate(g, cfg);
      Energy sum = m.energy.mac + m.energy.reduction;
      for (const auto& [name, en] : m.energy.access) sum += en;
      EXPECT_EQ(sum, m.energy.total);
      EXPECT_NEAR(m.tops_per_w, static_cast<double>(g.operations()) / m.energy.total.pj(), 1e-12);
      EXPECT_NEAR(m.gflops, static_cast<double>(g.operations()) / static_cast<double>(m.cycles.total_cycles),
                  1e-9);
      EXPECT_EQ(m.cycles.total_cycles, std::max(m.cycles.compute_cycles, m.cycles.memory_cycles));
    }
  }
}

TEST(Cycles, CalibratedPrimitiveIsComputeBoundOnSquareGemm) {
  const auto cfg = configs()[1];
  const auto m = evaluate(GemmShape(512, 512, 512), cfg);
  EXPECT_EQ(m.cycles.total_cycles, m.cycles.compute_cycles);
  EXPECT_FALSE(m.cycles.memory_bound());
}

TEST(Cycles, MatrixVectorAtRfIsBoundByMainMemory) {
  const auto cfg = configs()[1];
  for (const char* name : {"dlrm", "gpt-j-decode"}) {
    for (const auto& e : load_suite(kData + "/suites/" + name + ".json").entries) {
      const auto m = evaluate(e.shape, cfg);
      ASSERT_EQ(m.cycles.links.front().level, "DRAM");
      EXPECT_EQ(m.cycles.total_cycles, m.cycles.links.front().cycles) << name << " " << to_string(e.shape);
    }
  }
}

TEST(Cycles, SumModeAddsLinks) {
  auto cfg = configs()[1];
  cfg.memory_cycles = MemoryCycleMode::SumOverLinks;
  const auto m = evaluate(GemmShape(1, 4096, 4096), cfg);
  std::uint64_t sum = 0;
  for (const auto& l : m.cycles.links) sum += l.cycles;
  EXPECT_EQ(m.cycles.memory_cycles, sum);
  EXPECT_GT(m.cycles.links.size(), 1u);
}

TEST(Cycles, LinkCyclesAreCeilOfBytesOverBandwidth) {
  for (const auto& cfg : configs()) {
    const auto m = evaluate(GemmShape(300, 200, 100), cfg);
    for (const auto& l : m.cycles.links) {
      const auto bw = cfg.level(l.level).bandwidth_bytes_per_cycle;
      const auto c = Rational(static_cast<std::int64_t>(l.bytes)) / bw;
      EXPECT_EQ(l.cycles, static_cast<std::uint64_t>((c.numerator() + c.denominator() - 1) / c.denominator()));
    }
  }
}

TEST(Utilization, BaselineAndCim) {
  const auto cfgs = configs();
  const GemmShape g(64, 64, 64);
  const auto b = evaluate(g, cfgs[0]);
  EXPECT_EQ(b.utilization, Rational(1));  // 4x16x16 tiles divide evenly
  // M=1 tiles as 1x64x16: N=16 leaves three quarters of the columns idle
  EXPECT_EQ(evaluate(GemmShape(1, 16, 16), cfgs[0]).utilization, Rational(1, 4));
  // Anchor: K=256, N=32 fills 2 of 3 primitives
  EXPECT_EQ(evaluate(GemmShape(512, 32, 256), cfgs[1]).utilization, Rational(2, 3));
}

TEST(Ratios, IdenticalConfigsGiveOne) {
  for (const auto& cfg : configs()) {
    const auto r = compare(GemmShape(128, 256, 512), cfg, cfg);
    EXPECT_DOUBLE_EQ(r.tops_per_w, 1);
    EXPECT_DOUBLE_EQ(r.gflops, 1);
    EXPECT_DOUBLE_EQ(r.utilization, 1);
  }
}

TEST(Summary, Statistics) {
  const auto s = summarize({1, 2, 4});
  EXPECT_DOUBLE_EQ(s.mean, 7.0 / 3);
  EXPECT_NEAR(s.stddev, std::sqrt((16.0 / 9 + 1.0 / 9 + 25.0 / 9) / 3), 1e-12);
  EXPECT_NEAR(s.geomean, 2.0, 1e-12);
  EXPECT_EQ(s.min, 1);
  EXPECT_EQ(s.max, 4);
  const auto same = summarize({1, 1, 1});
  EXPECT_EQ(same.mean, 1);
  EXPECT_EQ(same.stddev, 0);
  EXPECT_THROW(summarize({}), InvariantError);
}

}  // namespace
}  // namespace cimdse
