#include "cimdse/costmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cimdse/error.hpp"
#include "cimdse/mapper.hpp"

namespace cimdse {

namespace {

constexpr std::array<Tensor, 3> kTensors{Tensor::A, Tensor::B, Tensor::Z};

std::uint64_t tensor_elements(const GemmShape& g, Tensor t) {
  switch (t) {
    case Tensor::A: return static_cast<std::uint64_t>(g.m * g.k);
    case Tensor::B: return static_cast<std::uint64_t>(g.k * g.n);
    case Tensor::Z: return static_cast<std::uint64_t>(g.m * g.n);
  }
  return 0;
}

struct Loop {
  Dim dim;
  std::int64_t factor;
};

// Loops of nests[from..], innermost first.
std::vector<Loop> loops_above(const Mapping& mapping, std::size_t from) {
  std::vector<Loop> out;
  for (std::size_t j = from; j < mapping.nests.size(); ++j) {
    const auto& nest = mapping.nests[j];
    for (auto it = nest.order.rbegin(); it != nest.order.rend(); ++it) {
      out.push_back({*it, nest.factors[*it]});
    }
  }
  return out;
}

// Times each child tile is delivered: the product of irrelevant loop factors
// outside the innermost relevant loop that actually iterates.
std::uint64_t refetch_factor(const std::vector<Loop>& loops, Tensor t) {
  std::size_t first = loops.size();
  for (std::size_t i = 0; i < loops.size(); ++i) {
    if (loops[i].factor > 1 && relevant(t, loops[i].dim)) {
      first = i;
      break;
    }
  }
  std::uint64_t r = 1;
  for (std::size_t i = first; i < loops.size(); ++i) {
    if (!relevant(t, loops[i].dim)) r *= static_cast<std::uint64_t>(loops[i].factor);
  }
  return r;
}

// Level receiving operands at the datapath.
std::size_t datapath_level(const SystemConfig& cfg, Tensor t) {
  if (cfg.is_cim() && t == Tensor::B) return cfg.level_index(cfg.cim().at_level);
  return cfg.levels.size() - 1;
}

// Links are crossed from the parent level down to, not including, this level.
std::size_t link_end(const SystemConfig& cfg) {
  if (cfg.is_cim()) return cfg.level_index(cfg.cim().at_level);
  return cfg.levels.size() - 1;
}

std::uint64_t product_all(const Mapping& mapping) {
  std::uint64_t p = 1;
  for (const auto& nest : mapping.nests) p *= static_cast<std::uint64_t>(nest.factors.product());
  return p;
}

std::uint64_t ceil_rational(Rational q) {
  const auto n = q.numerator();
  const auto d = q.denominator();
  return static_cast<std::uint64_t>((n + d - 1) / d);
}

}  // namespace

std::uint64_t LevelAccesses::total_elements() const {
  std::uint64_t s = 0;
  for (const auto& t : tensors) s += t.reads + t.writes;
  return s;
}

const LevelAccesses& AccessCounts::at(const std::string& level) const {
  for (const auto& l : levels) {
    if (l.level == level) return l;
  }
  throw Error("no access record for level '" + level + "'");
}

AccessCounts count_accesses(const Mapping& mapping, const GemmShape& g, const SystemConfig& cfg) {
  const auto buffers = cfg.buffer_levels();
  const std::size_t nb = buffers.size();
  if (mapping.nests.size() != nb) throw InvariantError("mapping does not match the buffer hierarchy");

  AccessCounts out;
  for (const auto& l : cfg.levels) out.levels.push_back({l.name, {}});

  // nest index -> config level index
  auto level_of_nest = [&](std::size_t i) { return nb - 1 - i; };

  for (auto t : kTensors) {
    // Storages on the path, innermost first: the datapath then kept buffers.
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < nb; ++i) {
      if (kept_at_buffer(cfg, t, i, nb)) kept.push_back(i);
    }
    const std::uint64_t size = tensor_elements(g, t);
    for (std::size_t s = 0; s < kept.size(); ++s) {
      const std::size_t parent_nest = kept[s];
      const bool to_datapath = s == 0;
      const std::size_t loops_from = to_datapath ? 0 : kept[s - 1] + 1;
      const std::size_t parent_level = level_of_nest(parent_nest);
      const std::size_t child_level = to_datapath ? datapath_level(cfg, t) : level_of_nest(kept[s - 1]);

      const std::uint64_t r = refetch_factor(loops_above(mapping, loops_from), t);
      Transfer tr;
      tr.tensor = t;
      tr.parent = cfg.levels[parent_level].name;
      tr.child = to_datapath ? "" : cfg.levels[child_level].name;
      if (t == Tensor::Z) {
        tr.up = size * r;
        tr.down = size * (r - 1);
      } else {
        tr.down = size * r;
      }
      auto& p = out.levels[parent_level][t];
      auto& c = out.levels[child_level][t];
      p.reads += tr.down;
      p.writes += tr.up;
      c.writes += tr.down;
      c.reads += tr.up;
      out.transfers.push_back(std::move(tr));
    }
  }

  std::uint64_t k_iters = 1;
  for (const auto& nest : mapping.nests) k_iters *= static_cast<std::uint64_t>(nest.factors.k);
  out.reductions = (k_iters - 1) * static_cast<std::uint64_t>(g.m * g.n);
  return out;
}

EnergyBreakdown compute_energy(const AccessCounts& counts, const Mapping&, const GemmShape& g,
                               const SystemConfig& cfg) {
  EnergyBreakdown e;
  const Energy per_mac = cfg.is_cim() ? cfg.cim().primitive.energy_per_mac : cfg.baseline().mac_energy;
  e.mac = per_mac * static_cast<std::uint64_t>(g.macs());
  e.total = e.mac;
  const auto bpe = static_cast<std::uint64_t>(g.bytes_per_element());
  for (std::size_t i = 0; i < cfg.levels.size(); ++i) {
    const auto& spec = cfg.levels[i];
    const std::uint64_t bytes = counts.levels[i].total_elements() * bpe;
    // Fractional accesses are charged pro rata, rounded to the nearest fJ.
    const Int128 num = static_cast<Int128>(bytes) * spec.access_energy.fj();
    const Int128 w = spec.access_width_bytes;
    const Energy le = Energy::from_fj((num + w / 2) / w);
    e.access.emplace_back(spec.name, le);
    e.total = e.total + le;
  }
  e.reduction = cfg.reduction_energy * counts.reductions;
  e.total = e.total + e.reduction;
  return e;
}

CycleBreakdown compute_cycles(const AccessCounts& counts, const Mapping& mapping, const GemmShape& g,
                              const SystemConfig& cfg) {
  CycleBreakdown c;
  const std::uint64_t iters = product_all(mapping);
  if (cfg.is_cim()) {
    const auto& prim = cfg.cim().primitive;
    const auto steps = static_cast<std::uint64_t>(rows_hold_used(mapping, prim) *
                                                  cols_hold_used(mapping, prim));
    c.compute_cycles = iters * steps * static_cast<std::uint64_t>(prim.cycles_per_step);
  } else {
    c.compute_cycles = iters;
  }

  const std::size_t end = link_end(cfg);
  std::vector<std::uint64_t> bytes(end, 0);
  const auto bpe = static_cast<std::uint64_t>(g.bytes_per_element());
  for (const auto& tr : counts.transfers) {
    const std::size_t p = cfg.level_index(tr.parent);
    const std::size_t ch = tr.child.empty() ? datapath_level(cfg, tr.tensor) : cfg.level_index(tr.child);
    for (std::size_t l = p; l < std::min(ch, end); ++l) bytes[l] += (tr.down + tr.up) * bpe;
  }
  for (std::size_t l = 0; l < end; ++l) {
    LinkCycles lc;
    lc.level = cfg.levels[l].name;
    lc.bytes = bytes[l];
    lc.cycles = ceil_rational(Rational(static_cast<std::int64_t>(bytes[l])) /
                              cfg.levels[l].bandwidth_bytes_per_cycle);
    if (cfg.memory_cycles == MemoryCycleMode::SumOverLinks) {
      c.memory_cycles += lc.cycles;
    } else {
      c.memory_cycles = std::max(c.memory_cycles, lc.cycles);
    }
    c.links.push_back(std::move(lc));
  }
  c.total_cycles = std::max(c.compute_cycles, c.memory_cycles);
  return c;
}

Rational utilization(const Mapping& mapping, const GemmShape& g, const SystemConfig& cfg) {
  if (cfg.is_cim()) {
    const std::int64_t passes = ceil_div(g.k, mapping.spatial.k) * ceil_div(g.n, mapping.spatial.n);
    return Rational(g.k * g.n, passes * cfg.total_mac_units());
  }
  return Rational(g.macs(), static_cast<std::int64_t>(product_all(mapping)) * cfg.total_mac_units());
}

Metrics evaluate_mapping(const Mapping& mapping, const GemmShape& g, const SystemConfig& cfg) {
  const auto violations = validate_mapping(mapping, g, cfg);
  if (!violations.empty()) {
    std::string msg = "invalid mapping:";
    for (const auto& v : violations) msg += " " + v;
    throw InvariantError(msg);
  }
  Metrics m;
  m.accesses = count_accesses(mapping, g, cfg);
  m.energy = compute_energy(m.accesses, mapping, g, cfg);
  m.cycles = compute_cycles(m.accesses, mapping, g, cfg);
  m.utilization = utilization(mapping, g, cfg);
  const double ops = static_cast<double>(g.operations());
  m.tops_per_w = ops / m.energy.total.pj();
  m.gflops = ops * to_double(cfg.clock_ghz) / static_cast<double>(m.cycles.total_cycles);
  return m;
}

Metrics evaluate(const GemmShape& g, const SystemConfig& cfg) {
  return evaluate_mapping(map_gemm(g, cfg), g, cfg);
}

namespace {
double safe_ratio(double a, double b) {
  if (b == 0) return a == 0 ? 1.0 : HUGE_VAL;
  return a / b;
}
}  // namespace

MetricRatios ratio(const Metrics& a, const Metrics& b) {
  return {safe_ratio(a.tops_per_w, b.tops_per_w), safe_ratio(a.gflops, b.gflops),
          safe_ratio(to_double(a.utilization), to_double(b.utilization))};
}

MetricRatios compare(const GemmShape& g, const SystemConfig& a, const SystemConfig& b) {
  return ratio(evaluate(g, a), evaluate(g, b));
}

RatioSummary summarize(const std::vector<double>& ratios) {
  if (ratios.empty()) throw InvariantError("cannot summarize an empty ratio list");
  RatioSummary s;
  const double n = static_cast<double>(ratios.size());
  double sum = 0, logsum = 0;
  s.min = s.max = ratios.front();
  for (double r : ratios) {
    sum += r;
    logsum += std::log(r);
    s.min = std::min(s.min, r);
    s.max = std::max(s.max, r);
  }
  s.mean = sum / n;
  double var = 0;
  for (double r : ratios) var += (r - s.mean) * (r - s.mean);
  s.stddev = std::sqrt(var / n);
  s.geomean = std::exp(logsum / n);
  return s;
}

}  // namespace cimdse
