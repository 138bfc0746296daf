#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cimdse/archspec.hpp"
#include "cimdse/mapping.hpp"
#include "cimdse/workload.hpp"

namespace cimdse {

struct TensorAccesses {
  std::uint64_t reads = 0;   // elements
  std::uint64_t writes = 0;  // elements

  friend bool operator==(const TensorAccesses&, const TensorAccesses&) = default;
};

struct LevelAccesses {
  std::string level;
  std::array<TensorAccesses, 3> tensors{};  // indexed by Tensor

  TensorAccesses& operator[](Tensor t) { return tensors[static_cast<int>(t)]; }
  const TensorAccesses& operator[](Tensor t) const { return tensors[static_cast<int>(t)]; }
  std::uint64_t total_elements() const;

  friend bool operator==(const LevelAccesses&, const LevelAccesses&) = default;
};

/// One data movement between two adjacent storages on a tensor's path.
/// `child` == "" means the datapath.
struct Transfer {
  Tensor tensor = Tensor::A;
  std::string parent;
  std::string child;
  std::uint64_t down = 0;  // elements parent -> child
  std::uint64_t up = 0;    // elements child -> parent (Z only)

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

struct AccessCounts {
  /// Every level of the config, outermost first, including the CiM level
  /// (weight writes) and the operand buffer.
  std::vector<LevelAccesses> levels;
  std::vector<Transfer> transfers;
  std::uint64_t reductions = 0;

  const LevelAccesses& at(const std::string& level) const;
};

struct EnergyBreakdown {
  Energy mac;
  std::vector<std::pair<std::string, Energy>> access;  // per level
  Energy reduction;
  Energy total;
};

struct LinkCycles {
  std::string level;  // the link out of this level toward compute
  std::uint64_t bytes = 0;
  std::uint64_t cycles = 0;
};

struct CycleBreakdown {
  std::uint64_t compute_cycles = 0;
  std::vector<LinkCycles> links;
  std::uint64_t memory_cycles = 0;  // max or sum over links, per config
  std::uint64_t total_cycles = 0;

  bool memory_bound() const { return memory_cycles > compute_cycles; }
};

struct Metrics {
  double tops_per_w = 0;
  double gflops = 0;  // giga INT-8 operations per second
  Rational utilization{0};
  EnergyBreakdown energy;
  CycleBreakdown cycles;
  AccessCounts accesses;
};

/// Per-tensor reuse analysis over the concatenated loop nest.
AccessCounts count_accesses(const Mapping& mapping, const GemmShape& g, const SystemConfig& cfg);

EnergyBreakdown compute_energy(const AccessCounts& counts, const Mapping& mapping,
                               const GemmShape& g, const SystemConfig& cfg);

CycleBreakdown compute_cycles(const AccessCounts& counts, const Mapping& mapping,
                              const GemmShape& g, const SystemConfig& cfg);

/// Occupied MAC units over total, averaged over weight passes.
Rational utilization(const Mapping& mapping, const GemmShape& g, const SystemConfig& cfg);

Metrics evaluate_mapping(const Mapping& mapping, const GemmShape& g, const SystemConfig& cfg);

/// map_gemm followed by evaluate_mapping.
Metrics evaluate(const GemmShape& g, const SystemConfig& cfg);

struct MetricRatios {
  double tops_per_w = 1;
  double gflops = 1;
  double utilization = 1;
};

/// Element-wise ratios a / b. A zero denominator with a zero numerator is 1.
MetricRatios ratio(const Metrics& a, const Metrics& b);
MetricRatios compare(const GemmShape& g, const SystemConfig& a, const SystemConfig& b);

struct RatioSummary {
  double mean = 0;
  double stddev = 0;  // population
  double geomean = 0;
  double min = 0;
  double max = 0;
};

RatioSummary summarize(const std::vector<double>& ratios);

}  // namespace cimdse
