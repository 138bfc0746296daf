#include "cimdse/mapper.hpp"

#include <algorithm>

#include "cimdse/error.hpp"

namespace cimdse {

namespace {

std::int64_t dim_of(const GemmShape& g, Dim d) {
  return d == Dim::M ? g.m : d == Dim::N ? g.n : g.k;
}

std::vector<std::int64_t> divisors(std::int64_t q) {
  std::vector<std::int64_t> lo, hi;
  for (std::int64_t d = 1; d * d <= q; ++d) {
    if (q % d == 0) {
      lo.push_back(d);
      if (d != q / d) hi.push_back(q / d);
    }
  }
  lo.insert(lo.end(), hi.rbegin(), hi.rend());
  return lo;
}

}  // namespace

Rational PartitionExtents::balance() const {
  return k >= n ? Rational(k, n) : Rational(n, k);
}

PartitionExtents partition_extents(const GemmShape& g, const CimPrimitiveSpec& prim,
                                   std::int64_t p_k, std::int64_t p_n) {
  return {std::min(g.k, p_k * prim.rows()), std::min(g.n, p_n * prim.columns())};
}

PartitionResult partition_weights(const GemmShape& g, const SystemConfig& cfg,
                                  const Rational& threshold) {
  if (!cfg.is_cim()) throw InvariantError("partition_weights needs a CiM engine");
  const auto& c = cfg.cim();
  const auto& prim = c.primitive;
  // Primitives beyond what the parallel rows/columns can use stay idle.
  const auto max_pk = std::min(c.primitive_count, ceil_div(g.k, prim.r_p));
  const auto max_pn = std::min(c.primitive_count, ceil_div(g.n, prim.c_p));

  struct Candidate {
    std::int64_t p_k, p_n;
    PartitionExtents ext;
    bool balanced;
    Rational balance;
    std::int64_t k_passes;
  };
  auto better = [](const Candidate& a, const Candidate& b) {
    if (a.balanced != b.balanced) return a.balanced;
    if (!a.balanced && a.balance != b.balance) return a.balance < b.balance;
    if (a.p_k * a.p_n != b.p_k * b.p_n) return a.p_k * a.p_n > b.p_k * b.p_n;
    if (a.k_passes != b.k_passes) return a.k_passes < b.k_passes;
    return a.p_n > b.p_n;
  };

  std::optional<Candidate> best;
  for (std::int64_t pk = 1; pk <= max_pk; ++pk) {
    for (std::int64_t pn = 1; pn <= max_pn && pk * pn <= c.primitive_count; ++pn) {
      auto ext = partition_extents(g, prim, pk, pn);
      Candidate cand{pk, pn, ext, ext.balance() < threshold, ext.balance(),
                     ceil_div(g.k, ext.k)};
      if (!best || better(cand, *best)) best = cand;
    }
  }
  PartitionResult r;
  r.partition = {best->p_k, best->p_n, threshold};
  r.spatial = {1, best->ext.n, best->ext.k};
  return r;
}

std::optional<std::int64_t> min_factor(std::int64_t q) {
  if (q <= 1) return std::nullopt;
  for (std::int64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) return d;
  }
  return q;
}

std::int64_t optimize_dimension(Dim dim, std::int64_t remaining, const ResidentSizes& sizes,
                                std::int64_t capacity) {
  auto footprint = [&](std::int64_t f) {
    std::int64_t a = relevant(Tensor::A, dim) ? sizes.input_bytes * f : sizes.input_bytes;
    std::int64_t b = relevant(Tensor::B, dim) ? sizes.weight_bytes * f : sizes.weight_bytes;
    std::int64_t z = relevant(Tensor::Z, dim) ? sizes.output_bytes * f : sizes.output_bytes;
    return a + b + z;
  };
  std::int64_t factor = 1;
  while (footprint(factor) <= capacity) {
    auto step = min_factor(remaining / factor);
    if (!step) break;  // dimension fully mapped at this level
    if (footprint(factor * *step) > capacity) break;
    factor *= *step;
  }
  return factor;
}

LoopOrder decide_loop_order(std::int64_t m, std::int64_t n, std::int64_t k) {
  if (m > n) {
    if (n > k) return {Dim::M, Dim::N, Dim::K};
    if (m > k) return {Dim::M, Dim::K, Dim::N};
    return {Dim::K, Dim::M, Dim::N};
  }
  if (n < k) return {Dim::K, Dim::N, Dim::M};
  if (m > k) return {Dim::N, Dim::M, Dim::K};
  return {Dim::N, Dim::K, Dim::M};
}

LoopOrder nest_order(const LoopOrder& sorted) {
  return {sorted[2], sorted[1], sorted[0]};
}

LoopOrder compute_loop_order(const SystemConfig& cfg) {
  // CiM: M innermost for input reuse against resident weights, K before N so
  // partial sums finish inside the arrays. Baseline: outputs stay in the PEs.
  if (cfg.is_cim()) return {Dim::N, Dim::K, Dim::M};
  return {Dim::M, Dim::N, Dim::K};
}

SpatialTile baseline_spatial(const GemmShape& g, const BaselineEngine& e) {
  if (g.m >= e.subcores) return {e.subcores, e.array_cols, e.array_rows};
  return {1, e.array_cols * e.subcores, e.array_rows};
}

Mapping map_with_priority(const GemmShape& g, const SystemConfig& cfg, const DimPriority& priority) {
  Mapping mapping;
  if (cfg.is_cim()) {
    auto part = partition_weights(g, cfg);
    mapping.partition = part.partition;
    mapping.spatial = part.spatial;
  } else {
    mapping.spatial = baseline_spatial(g, cfg.baseline());
  }

  const auto buffers = cfg.buffer_levels();
  const std::size_t count = buffers.size();
  mapping.nests.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    mapping.nests[i].level = buffers[count - 1 - i]->name;
  }

  const int bpe = g.bytes_per_element();
  Factors used{mapping.spatial.m, mapping.spatial.n, mapping.spatial.k};
  auto remaining = [&](Dim d) { return ceil_div(dim_of(g, d), used[d]); };
  auto extent = [&](Dim d) { return std::min(used[d], dim_of(g, d)); };

  for (std::size_t i = 0; i + 1 < count; ++i) {
    const auto* level = buffers[count - 1 - i];
    auto& nest = mapping.nests[i];
    const std::int64_t cap = *level->capacity_bytes;
    const bool keeps_b = kept_at_buffer(cfg, Tensor::B, i, count);

    auto sizes = [&] {
      ResidentSizes s;
      s.input_bytes = extent(Dim::M) * extent(Dim::K) * bpe;
      s.output_bytes = extent(Dim::M) * extent(Dim::N) * bpe;
      s.weight_bytes = keeps_b ? extent(Dim::K) * extent(Dim::N) * bpe : 0;
      return s;
    };

    // The leading dimension takes its largest fitting divisor; the others
    // grow step by step in what capacity remains.
    nest.factors = {};
    const Dim lead = priority[0];
    std::int64_t best = 1;
    for (auto d : divisors(remaining(lead))) {
      nest.factors[lead] = d;
      if (resident_bytes(mapping, i, g, cfg) > cap) break;
      best = d;
    }
    nest.factors[lead] = best;
    used[lead] *= best;
    for (std::size_t j = 1; j < priority.size(); ++j) {
      const Dim d = priority[j];
      nest.factors[d] = optimize_dimension(d, remaining(d), sizes(), cap);
      used[d] *= nest.factors[d];
    }

    nest.order = i == 0 ? compute_loop_order(cfg)
                        : nest_order(decide_loop_order(nest.factors.m, nest.factors.n, nest.factors.k));
  }

  auto& top = mapping.nests.back();
  top.factors = {remaining(Dim::M), remaining(Dim::N), remaining(Dim::K)};
  top.order = count == 1 ? compute_loop_order(cfg)
                         : nest_order(decide_loop_order(top.factors.m, top.factors.n, top.factors.k));
  return mapping;
}

Mapping map_gemm(const GemmShape& g, const SystemConfig& cfg) {
  return map_with_priority(g, cfg, {Dim::M, Dim::K, Dim::N});
}

}  // namespace cimdse
