#include "cimdse/workload.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "cimdse/error.hpp"
#include "json_util.hpp"

namespace cimdse {

using detail::json;

GemmShape::GemmShape(std::int64_t m_, std::int64_t n_, std::int64_t k_, int bp)
    : m(m_), n(n_), k(k_), bit_precision(bp) {
  if (m < 1 || n < 1 || k < 1) {
    throw InvariantError("GEMM dimensions must be >= 1, got " + to_string(*this));
  }
  if (bp < 8 || bp % 8 != 0) {
    throw InvariantError("bit precision must be a positive multiple of 8, got " +
                         std::to_string(bp));
  }
}

std::string to_string(const GemmShape& g) {
  std::ostringstream os;
  os << "GEMM(" << g.m << "," << g.n << "," << g.k << ")";
  if (g.bit_precision != 8) os << "@" << g.bit_precision << "b";
  return os.str();
}

GemmShape conv_to_gemm(const ConvLayerSpec& l, int bp) {
  for (auto v : {l.out_height, l.out_width, l.out_channels, l.filter_height, l.filter_width,
                 l.in_channels}) {
    if (v < 1) throw InvariantError("convolution layer fields must be >= 1");
  }
  return GemmShape(l.out_height * l.out_width, l.out_channels,
                   l.filter_height * l.filter_width * l.in_channels, bp);
}

GemmShape fc_to_gemm(std::int64_t input_dim, std::int64_t output_dim, std::int64_t batch,
                     int bp) {
  return GemmShape(output_dim, batch, input_dim, bp);
}

std::vector<GemmShape> attention_to_gemms(const AttentionLayerSpec& l, int bp) {
  if (l.seq_length < 1 || l.embedding_size < 1) {
    throw InvariantError("attention layer fields must be >= 1");
  }
  const auto s = l.seq_length;
  const auto e = l.embedding_size;
  return {GemmShape(e, s, e, bp), GemmShape(s, s, e, bp), GemmShape(e, s, s, bp)};
}

Rational algorithmic_reuse(const GemmShape& g) {
  const std::int64_t bytes =
      g.bytes_per_element() * (g.m * g.n + g.n * g.k + g.m * g.k);
  return Rational(g.operations(), bytes);
}

std::vector<GemmShape> synthetic_sweep(std::int64_t min_dim, std::int64_t max_dim,
                                       std::size_t count, std::uint64_t seed, int bp) {
  if (min_dim < 1 || min_dim > max_dim) {
    throw InvariantError("invalid sweep range [" + std::to_string(min_dim) + ", " +
                         std::to_string(max_dim) + "]");
  }
  if (count < 1) throw InvariantError("sweep count must be >= 1");
  std::vector<std::int64_t> powers;
  for (std::int64_t p = 1; p <= max_dim; p *= 2) {
    if (p >= min_dim) powers.push_back(p);
  }
  if (powers.empty()) {
    throw InvariantError("no power of two in [" + std::to_string(min_dim) + ", " +
                         std::to_string(max_dim) + "]");
  }
  // mt19937_64 output is specified by the standard; the modulo draw keeps the
  // sequence identical across standard libraries.
  std::mt19937_64 rng(seed);
  auto draw = [&] { return powers[rng() % powers.size()]; };
  std::vector<GemmShape> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto m = draw();
    auto n = draw();
    auto k = draw();
    out.emplace_back(m, n, k, bp);
  }
  return out;
}

WorkloadSuite parse_suite(std::string_view text, const std::string& origin) {
  json doc = detail::parse_json(text, origin);
  WorkloadSuite suite;
  suite.name = detail::require_string(doc, "name", origin);
  const auto& entries = detail::require(doc, "entries", origin);
  if (!entries.is_array()) throw ParseError(origin + ".entries", "expected an array");
  if (entries.empty()) throw InvariantError(origin + ": suite '" + suite.name + "' has no entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string path = origin + ".entries[" + std::to_string(i) + "]";
    const auto& e = entries[i];
    auto m = detail::require_int(e, "m", path);
    auto n = detail::require_int(e, "n", path);
    auto k = detail::require_int(e, "k", path);
    auto bp = e.contains("bp") ? detail::require_int(e, "bp", path) : 8;
    auto count = e.contains("count") ? detail::require_int(e, "count", path) : 1;
    if (count < 1) throw InvariantError(path + ": count must be >= 1");
    try {
      suite.entries.push_back({GemmShape(m, n, k, static_cast<int>(bp)), count});
    } catch (const InvariantError& err) {
      throw InvariantError(path + ": " + err.what());
    }
  }
  return suite;
}

WorkloadSuite load_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open suite file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_suite(buf.str(), path.string());
}

std::string suite_to_json(const WorkloadSuite& suite) {
  json doc;
  doc["name"] = suite.name;
  doc["entries"] = json::array();
  for (const auto& e : suite.entries) {
    doc["entries"].push_back({{"m", e.shape.m},
                              {"n", e.shape.n},
                              {"k", e.shape.k},
                              {"bp", e.shape.bit_precision},
                              {"count", e.count}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace cimdse
