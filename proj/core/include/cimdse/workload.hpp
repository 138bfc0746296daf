#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cimdse/units.hpp"

namespace cimdse {

/// One GEMM problem: an M x K input times a K x N weight gives an M x N output.
struct GemmShape {
  std::int64_t m = 1;
  std::int64_t n = 1;
  std::int64_t k = 1;
  int bit_precision = 8;

  GemmShape() = default;
  /// Throws InvariantError unless every dimension is >= 1 and the precision
  /// is a positive multiple of 8 bits.
  GemmShape(std::int64_t m, std::int64_t n, std::int64_t k, int bit_precision = 8);

  int bytes_per_element() const { return bit_precision / 8; }
  /// 2 * M * N * K.
  std::int64_t operations() const { return 2 * m * n * k; }
  std::int64_t macs() const { return m * n * k; }
  std::int64_t input_elements() const { return m * k; }
  std::int64_t weight_elements() const { return k * n; }
  std::int64_t output_elements() const { return m * n; }

  friend bool operator==(const GemmShape&, const GemmShape&) = default;
  friend auto operator<=>(const GemmShape&, const GemmShape&) = default;
};

std::string to_string(const GemmShape& g);

struct ConvLayerSpec {
  std::int64_t out_height = 1;
  std::int64_t out_width = 1;
  std::int64_t out_channels = 1;
  std::int64_t filter_height = 1;
  std::int64_t filter_width = 1;
  std::int64_t in_channels = 1;
};

struct AttentionLayerSpec {
  std::int64_t seq_length = 1;
  std::int64_t embedding_size = 1;
};

struct SuiteEntry {
  GemmShape shape;
  std::int64_t count = 1;

  friend bool operator==(const SuiteEntry&, const SuiteEntry&) = default;
};

struct WorkloadSuite {
  std::string name;
  std::vector<SuiteEntry> entries;
};

/// im2col lowering: M = out plane, N = out channels, K = filter volume.
GemmShape conv_to_gemm(const ConvLayerSpec& layer, int bit_precision = 8);

/// Fully connected layer with the token/batch count on N, following the
/// attention rows: M = output dim, N = batch, K = input dim.
GemmShape fc_to_gemm(std::int64_t input_dim, std::int64_t output_dim,
                     std::int64_t batch, int bit_precision = 8);

/// Returns {K/V projection, QK^T logits, (QK^T)V}, single batch.
std::vector<GemmShape> attention_to_gemms(const AttentionLayerSpec& layer,
                                          int bit_precision = 8);

/// Operations per byte assuming every matrix is moved exactly once.
Rational algorithmic_reuse(const GemmShape& g);

/// Each of M, N, K drawn independently and uniformly from the powers of two
/// in [min_dim, max_dim]. Throws InvariantError on an empty range.
std::vector<GemmShape> synthetic_sweep(std::int64_t min_dim, std::int64_t max_dim,
                                       std::size_t count, std::uint64_t seed,
                                       int bit_precision = 8);

WorkloadSuite parse_suite(std::string_view json_text, const std::string& origin = "<suite>");
WorkloadSuite load_suite(const std::filesystem::path& path);
std::string suite_to_json(const WorkloadSuite& suite);

}  // namespace cimdse
