#include <algorithm>
#include <random>

#include "cimdse/costmodel.hpp"
#include "cimdse/mapper.hpp"

namespace cimdse {

namespace {

std::int64_t dim_of(const GemmShape& g, Dim d) {
  return d == Dim::M ? g.m : d == Dim::N ? g.n : g.k;
}

std::vector<std::int64_t> divisors_of(std::int64_t q) {
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

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

HeuristicResult heuristic_search(const GemmShape& g, const SystemConfig& cfg,
                                 const HeuristicOptions& options) {
  Sampler s(options.seed);
  const auto buffers = cfg.buffer_levels();
  const std::size_t count = buffers.size();

  std::vector<LoopOrder> orders;
  LoopOrder o{Dim::M, Dim::N, Dim::K};
  do orders.push_back(o);
  while (std::next_permutation(o.begin(), o.end()));

  HeuristicResult result;
  double best_eff = -1;
  std::uint64_t invalid_run = 0;
  std::uint64_t stale_run = 0;

  if (options.invalid_limit == 0) return result;
  while (options.max_samples == 0 || result.samples < options.max_samples) {
    ++result.samples;
    // Spatial extents are divisors like every other factor; a draw that
    // overflows the engine is rejected by validation.
    Mapping m;
    if (cfg.is_cim()) {
      const auto count_p = cfg.cim().primitive_count;
      const auto pk = s.uniform(1, count_p);
      const auto pn = s.uniform(1, count_p / pk);
      m.partition = {pk, pn};
      m.spatial = {1, s.pick(divisors_of(g.n)), s.pick(divisors_of(g.k))};
    } else {
      m.spatial = {s.pick(divisors_of(g.m)), s.pick(divisors_of(g.n)), s.pick(divisors_of(g.k))};
    }

    m.nests.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      m.nests[i].level = buffers[count - 1 - i]->name;
      m.nests[i].order = s.pick(orders);
    }
    for (Dim d : {Dim::M, Dim::N, Dim::K}) {
      std::int64_t rest = ceil_div(dim_of(g, d), m.spatial[d]);
      for (std::size_t i = 0; i + 1 < count; ++i) {
        const auto f = s.pick(divisors_of(rest));
        m.nests[i].factors[d] = f;
        rest /= f;
      }
      m.nests.back().factors[d] = rest;
    }

    if (!validate_mapping(m, g, cfg).empty()) {
      if (++invalid_run >= options.invalid_limit) break;
      continue;
    }
    invalid_run = 0;
    ++result.valid_samples;
    const double eff = evaluate_mapping(m, g, cfg).tops_per_w;
    if (eff > best_eff) {
      best_eff = eff;
      result.best = std::move(m);
      stale_run = 0;
    } else if (options.victory_limit != 0 && ++stale_run >= options.victory_limit) {
      break;
    }
  }
  return result;
}

}  // namespace cimdse
