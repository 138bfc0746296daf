#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cimdse/archspec.hpp"
#include "cimdse/units.hpp"
#include "cimdse/workload.hpp"

namespace cimdse {

enum class Dim { M = 0, N = 1, K = 2 };

char dim_char(Dim d);

struct Factors {
  std::int64_t m = 1;
  std::int64_t n = 1;
  std::int64_t k = 1;

  std::int64_t& operator[](Dim d) { return d == Dim::M ? m : d == Dim::N ? n : k; }
  std::int64_t operator[](Dim d) const { return d == Dim::M ? m : d == Dim::N ? n : k; }
  std::int64_t product() const { return m * n * k; }

  friend bool operator==(const Factors&, const Factors&) = default;
};

/// Outermost loop first.
using LoopOrder = std::array<Dim, 3>;

std::string to_string(const LoopOrder& order);   // e.g. "NKM"
LoopOrder parse_loop_order(std::string_view text);
bool is_permutation(const LoopOrder& order);

/// Loops that walk the tile held at `level`, delivering subtiles to the
/// next level down (or to the datapath for the innermost nest).
struct LoopNest {
  std::string level;
  Factors factors;
  LoopOrder order{Dim::M, Dim::N, Dim::K};

  friend bool operator==(const LoopNest&, const LoopNest&) = default;
};

struct PrimitivePartition {
  std::int64_t p_k = 1;
  std::int64_t p_n = 1;
  Rational threshold{4};

  friend bool operator==(const PrimitivePartition&, const PrimitivePartition&) = default;
};

/// Extents processed by the datapath in one step. For CiM, k x n is the
/// resident weight tile across all engaged primitives and m is 1.
struct SpatialTile {
  std::int64_t m = 1;
  std::int64_t n = 1;
  std::int64_t k = 1;

  std::int64_t operator[](Dim d) const { return d == Dim::M ? m : d == Dim::N ? n : k; }
  friend bool operator==(const SpatialTile&, const SpatialTile&) = default;
};

/// nests[0] belongs to the buffer adjacent to compute, nests.back() to DRAM.
struct Mapping {
  PrimitivePartition partition;
  SpatialTile spatial;
  std::vector<LoopNest> nests;

  /// Product of the factors of `d` over every nest.
  std::int64_t temporal(Dim d) const;
  /// spatial[d] * temporal(d); must reach the GEMM dimension.
  std::int64_t coverage(Dim d) const;
  /// Extent of `d` in the tile held at nests[i] (clipped to the GEMM).
  std::int64_t tile_extent(std::size_t i, Dim d, const GemmShape& g) const;

  friend bool operator==(const Mapping&, const Mapping&) = default;
};

enum class Tensor { A = 0, B = 1, Z = 2 };  // input, weight, output

char tensor_char(Tensor t);
bool relevant(Tensor t, Dim d);

/// Which buffer levels hold a copy of `t` for this engine. CiM weights skip
/// the intermediate buffers and stream straight into the arrays.
bool kept_at_buffer(const SystemConfig& cfg, Tensor t, std::size_t nest_index,
                    std::size_t nest_count);

/// Bytes resident at the buffer owning nests[i].
std::int64_t resident_bytes(const Mapping& mapping, std::size_t i, const GemmShape& g,
                            const SystemConfig& cfg);

/// Hold slots actually used along K and N in each engaged primitive.
std::int64_t rows_hold_used(const Mapping& mapping, const CimPrimitiveSpec& prim);
std::int64_t cols_hold_used(const Mapping& mapping, const CimPrimitiveSpec& prim);

/// Violations are short tags such as "capacity@SMEM" or "coverage@K".
std::vector<std::string> validate_mapping(const Mapping& mapping, const GemmShape& g,
                                          const SystemConfig& cfg);

std::string mapping_to_json(const Mapping& mapping);
Mapping parse_mapping(std::string_view json_text);

}  // namespace cimdse
