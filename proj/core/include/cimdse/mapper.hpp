#pragma once

#include <cstdint>
#include <optional>

#include "cimdse/archspec.hpp"
#include "cimdse/mapping.hpp"
#include "cimdse/workload.hpp"

namespace cimdse {

struct PartitionResult {
  PrimitivePartition partition;
  SpatialTile spatial;
};

/// Mapped K and N extents for a candidate split (clipped to the GEMM).
struct PartitionExtents {
  std::int64_t k = 1;
  std::int64_t n = 1;
  Rational balance() const;  // larger / smaller
};

PartitionExtents partition_extents(const GemmShape& g, const CimPrimitiveSpec& prim,
                                   std::int64_t p_k, std::int64_t p_n);

/// Spreads the weight across primitives first, then across hold slots.
/// Among splits with balance < threshold the most primitives win; with no
/// balanced split, the least skewed one wins. Remaining ties go to fewer
/// partial-sum passes over K, then to larger p_n.
/// Requires cfg.is_cim().
PartitionResult partition_weights(const GemmShape& g, const SystemConfig& cfg,
                                  const Rational& threshold = Rational{4});

/// Smallest prime divisor of q, or nullopt when q == 1.
std::optional<std::int64_t> min_factor(std::int64_t q);

struct ResidentSizes {
  std::int64_t input_bytes = 0;   // A partition
  std::int64_t output_bytes = 0;  // Z partition
  std::int64_t weight_bytes = 0;  // only for levels that buffer B
};

/// Grows a loop factor of `dim` by repeated smallest-prime steps of
/// remaining/factor while the grown resident footprint fits `capacity`.
/// Each tensor's bytes scale by the factor iff it depends on `dim`.
std::int64_t optimize_dimension(Dim dim, std::int64_t remaining, const ResidentSizes& sizes,
                                std::int64_t capacity);

/// Descending sort of three loop factors, reproducing the strict-comparison
/// branch structure of the reference permutation rule. map_gemm places the
/// first entry (largest factor) innermost; see nest_order.
LoopOrder decide_loop_order(std::int64_t f_m, std::int64_t f_n, std::int64_t f_k);

/// Converts a decide_loop_order sequence into an outermost-first LoopOrder.
LoopOrder nest_order(const LoopOrder& sorted);

/// The loop order used at the buffer adjacent to compute.
LoopOrder compute_loop_order(const SystemConfig& cfg);

/// Spatial unrolling of the tensor-core-like PE array for a GEMM.
SpatialTile baseline_spatial(const GemmShape& g, const BaselineEngine& engine);

/// Order in which tile factors grow at each on-chip buffer. The first
/// dimension takes its largest fitting divisor, the rest go through
/// optimize_dimension.
using DimPriority = std::array<Dim, 3>;

/// Greedy tiling, inner buffer first: the leading dimension takes its largest
/// fitting divisor, the others grow by optimize_dimension.
Mapping map_with_priority(const GemmShape& g, const SystemConfig& cfg, const DimPriority& priority);

/// Priority mapper: M, then K, then N, for every engine. Always returns a
/// mapping that passes validate_mapping.
Mapping map_gemm(const GemmShape& g, const SystemConfig& cfg);

struct HeuristicOptions {
  std::uint64_t seed = 1;
  /// Stop after this many consecutive invalid samples.
  std::uint64_t invalid_limit = 100000;
  /// Stop after this many consecutive valid samples that do not improve the
  /// best TOPS/W. 0 disables the condition.
  std::uint64_t victory_limit = 1000;
  /// Hard cap on total samples. 0 disables the cap.
  std::uint64_t max_samples = 0;
};

struct HeuristicResult {
  std::optional<Mapping> best;  // nullopt: nothing valid was sampled
  std::uint64_t samples = 0;
  std::uint64_t valid_samples = 0;
};

/// Random mapspace search keeping the best-by-TOPS/W valid mapping.
HeuristicResult heuristic_search(const GemmShape& g, const SystemConfig& cfg,
                                 const HeuristicOptions& options = {});

}  // namespace cimdse
