#include "cimdse/mapping.hpp"

#include <algorithm>

#include "cimdse/error.hpp"
#include "json_util.hpp"

namespace cimdse {

using detail::json;

char dim_char(Dim d) { return d == Dim::M ? 'M' : d == Dim::N ? 'N' : 'K'; }

std::string to_string(const LoopOrder& order) {
  std::string s;
  for (auto d : order) s.push_back(dim_char(d));
  return s;
}

LoopOrder parse_loop_order(std::string_view text) {
  std::string compact;
  for (char c : text) {
    if (c == ',' || c == ' ') continue;
    compact.push_back(c);
  }
  if (compact.size() != 3) throw InvariantError("loop order must name three dimensions: '" +
                                                std::string(text) + "'");
  LoopOrder order{};
  for (std::size_t i = 0; i < 3; ++i) {
    switch (compact[i]) {
      case 'M': order[i] = Dim::M; break;
      case 'N': order[i] = Dim::N; break;
      case 'K': order[i] = Dim::K; break;
      default: throw InvariantError("bad loop order '" + std::string(text) + "'");
    }
  }
  if (!is_permutation(order)) throw InvariantError("loop order repeats a dimension: '" +
                                                   std::string(text) + "'");
  return order;
}

bool is_permutation(const LoopOrder& order) {
  int seen = 0;
  for (auto d : order) seen |= 1 << static_cast<int>(d);
  return seen == 0b111;
}

char tensor_char(Tensor t) { return t == Tensor::A ? 'A' : t == Tensor::B ? 'B' : 'Z'; }

bool relevant(Tensor t, Dim d) {
  switch (t) {
    case Tensor::A: return d != Dim::N;
    case Tensor::B: return d != Dim::M;
    case Tensor::Z: return d != Dim::K;
  }
  return false;
}

std::int64_t Mapping::temporal(Dim d) const {
  std::int64_t p = 1;
  for (const auto& n : nests) p *= n.factors[d];
  return p;
}

std::int64_t Mapping::coverage(Dim d) const { return spatial[d] * temporal(d); }

std::int64_t Mapping::tile_extent(std::size_t i, Dim d, const GemmShape& g) const {
  std::int64_t e = spatial[d];
  for (std::size_t j = 0; j <= i && j < nests.size(); ++j) e *= nests[j].factors[d];
  const std::int64_t dim = d == Dim::M ? g.m : d == Dim::N ? g.n : g.k;
  return std::min(e, dim);
}

bool kept_at_buffer(const SystemConfig& cfg, Tensor t, std::size_t nest_index,
                    std::size_t nest_count) {
  if (cfg.is_cim() && t == Tensor::B) return nest_index + 1 == nest_count;
  return true;
}

std::int64_t resident_bytes(const Mapping& mapping, std::size_t i, const GemmShape& g,
                            const SystemConfig& cfg) {
  const auto em = mapping.tile_extent(i, Dim::M, g);
  const auto en = mapping.tile_extent(i, Dim::N, g);
  const auto ek = mapping.tile_extent(i, Dim::K, g);
  const auto count = mapping.nests.size();
  std::int64_t elems = 0;
  if (kept_at_buffer(cfg, Tensor::A, i, count)) elems += em * ek;
  if (kept_at_buffer(cfg, Tensor::B, i, count)) elems += ek * en;
  if (kept_at_buffer(cfg, Tensor::Z, i, count)) elems += em * en;
  return elems * g.bytes_per_element();
}

std::int64_t rows_hold_used(const Mapping& mapping, const CimPrimitiveSpec& prim) {
  return ceil_div(mapping.spatial.k, mapping.partition.p_k * prim.r_p);
}

std::int64_t cols_hold_used(const Mapping& mapping, const CimPrimitiveSpec& prim) {
  return ceil_div(mapping.spatial.n, mapping.partition.p_n * prim.c_p);
}

std::vector<std::string> validate_mapping(const Mapping& mapping, const GemmShape& g,
                                          const SystemConfig& cfg) {
  std::vector<std::string> v;
  const auto buffers = cfg.buffer_levels();
  if (mapping.nests.size() != buffers.size()) {
    v.emplace_back("structure");
    return v;
  }
  for (std::size_t i = 0; i < mapping.nests.size(); ++i) {
    const auto& nest = mapping.nests[i];
    const auto& expected = buffers[buffers.size() - 1 - i]->name;
    if (nest.level != expected) v.push_back("structure@" + nest.level);
    if (nest.factors.m < 1 || nest.factors.n < 1 || nest.factors.k < 1) {
      v.push_back("factor@" + nest.level);
    }
    if (!is_permutation(nest.order)) v.push_back("order@" + nest.level);
  }
  if (!v.empty()) return v;

  const auto& s = mapping.spatial;
  if (s.m < 1 || s.n < 1 || s.k < 1) {
    v.emplace_back("spatial");
  } else if (cfg.is_cim()) {
    const auto& c = cfg.cim();
    const auto& p = mapping.partition;
    if (p.p_k < 1 || p.p_n < 1 || p.p_k * p.p_n > c.primitive_count) v.emplace_back("partition");
    if (s.m != 1 || s.k > p.p_k * c.primitive.rows() || s.n > p.p_n * c.primitive.columns()) {
      v.emplace_back("spatial");
    }
  } else {
    const auto& b = cfg.baseline();
    if (s.k > b.array_rows || s.m > b.subcores || s.m * s.n > b.array_cols * b.subcores) {
      v.emplace_back("spatial");
    }
  }

  if (mapping.coverage(Dim::M) < g.m) v.emplace_back("coverage@M");
  if (mapping.coverage(Dim::N) < g.n) v.emplace_back("coverage@N");
  if (mapping.coverage(Dim::K) < g.k) v.emplace_back("coverage@K");

  for (std::size_t i = 0; i < mapping.nests.size(); ++i) {
    const auto* level = buffers[buffers.size() - 1 - i];
    if (level->unbounded()) continue;
    if (resident_bytes(mapping, i, g, cfg) > *level->capacity_bytes) {
      v.push_back("capacity@" + level->name);
    }
  }
  return v;
}

std::string mapping_to_json(const Mapping& mapping) {
  json doc;
  doc["partition"] = {{"pk", mapping.partition.p_k}, {"pn", mapping.partition.p_n}};
  doc["spatial"] = {{"m", mapping.spatial.m}, {"n", mapping.spatial.n}, {"k", mapping.spatial.k}};
  doc["nests"] = json::array();
  for (const auto& n : mapping.nests) {
    doc["nests"].push_back({{"level", n.level},
                            {"factors", {n.factors.m, n.factors.n, n.factors.k}},
                            {"order", to_string(n.order)}});
  }
  return doc.dump();
}

Mapping parse_mapping(std::string_view text) {
  json doc = detail::parse_json(text, "<mapping>");
  Mapping m;
  const auto& p = detail::require(doc, "partition", "mapping");
  m.partition.p_k = detail::require_int(p, "pk", "mapping.partition");
  m.partition.p_n = detail::require_int(p, "pn", "mapping.partition");
  if (doc.contains("spatial")) {
    const auto& s = doc["spatial"];
    m.spatial.m = detail::require_int(s, "m", "mapping.spatial");
    m.spatial.n = detail::require_int(s, "n", "mapping.spatial");
    m.spatial.k = detail::require_int(s, "k", "mapping.spatial");
  }
  const auto& nests = detail::require(doc, "nests", "mapping");
  for (std::size_t i = 0; i < nests.size(); ++i) {
    const std::string path = "mapping.nests[" + std::to_string(i) + "]";
    LoopNest n;
    n.level = detail::require_string(nests[i], "level", path);
    const auto& f = detail::require(nests[i], "factors", path);
    if (!f.is_array() || f.size() != 3) throw ParseError(path + ".factors", "expected [fm,fn,fk]");
    n.factors = {detail::as_int(f[0], path), detail::as_int(f[1], path), detail::as_int(f[2], path)};
    n.order = parse_loop_order(detail::require_string(nests[i], "order", path));
    m.nests.push_back(n);
  }
  return m;
}

}  // namespace cimdse
