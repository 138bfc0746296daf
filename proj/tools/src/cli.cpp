#include "cimdse_cli/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cimdse/archspec.hpp"
#include "cimdse/costmodel.hpp"
#include "cimdse/error.hpp"
#include "cimdse/mapper.hpp"
#include "cimdse/workload.hpp"

namespace cimdse::cli {

namespace fs = std::filesystem;

fs::path data_dir() {
  if (const char* env = std::getenv("CIMDSE_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  if (fs::is_directory(CIMDSE_BUILD_DATA_DIR)) return CIMDSE_BUILD_DATA_DIR;
  return CIMDSE_INSTALL_DATA_DIR;
}

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MapperMode { Priority, Heuristic };

const char* mode_name(MapperMode m) { return m == MapperMode::Priority ? "priority" : "heuristic"; }

MapperMode parse_mode(const std::string& s) {
  return s == "heuristic" ? MapperMode::Heuristic : MapperMode::Priority;
}

struct Options {
  std::vector<std::string> configs;
  std::vector<std::string> primitives;
  std::vector<std::string> placements;
  std::string base;
  std::vector<std::string> suites;
  std::string sweep;
  std::optional<std::int64_t> fix_m, fix_n, fix_k;
  std::uint64_t seed = 1;
  std::string mapper = "priority";
  std::string reference;
  std::string reference_mapper;
  std::string format = "csv";
  std::string out;
  std::string memory_cycles;
  unsigned jobs = 0;
  std::uint64_t invalid_limit = 100000;
  std::uint64_t victory_limit = 1000;
  std::uint64_t max_samples = 0;
  bool quiet = false;
};

struct NamedConfig {
  std::string label;  // as given on the command line
  SystemConfig config;
};

struct Item {
  std::string suite;
  SuiteEntry entry;
};

fs::path resolve(const std::string& arg, const char* dir, const char* what) {
  if (fs::is_regular_file(arg)) return arg;
  const fs::path root = data_dir() / dir;
  for (const auto& cand : {root / arg, root / (arg + ".json")}) {
    if (fs::is_regular_file(cand)) return cand;
  }
  throw UsageError(std::string("no such ") + what + " '" + arg + "'");
}

std::vector<NamedConfig> load_configs(const Options& o) {
  std::vector<NamedConfig> out;
  for (const auto& c : o.configs) out.push_back({c, load_config(resolve(c, "configs", "config"))});
  if (!o.primitives.empty()) {
    const SystemConfig base = load_config(resolve(o.base.empty() ? "baseline" : o.base, "configs", "config"));
    std::vector<Placement> placements;
    for (const auto& p : o.placements) placements.push_back(parse_placement(p));
    if (placements.empty()) placements.push_back(Placement::CimRf);
    for (const auto& path : o.primitives) {
      const auto prim = load_primitive(resolve(path, "primitives", "primitive"));
      for (auto pl : placements) {
        auto cfg = build_config(base, pl, &prim);
        out.push_back({cfg.name, std::move(cfg)});
      }
    }
  } else if (!o.placements.empty()) {
    throw UsageError("--placement needs --primitive");
  }
  if (out.empty()) throw UsageError("no configuration given (use --config or --primitive)");
  if (!o.memory_cycles.empty()) {
    const auto mode = o.memory_cycles == "sum" ? MemoryCycleMode::SumOverLinks : MemoryCycleMode::MaxOverLinks;
    for (auto& c : out) c.config.memory_cycles = mode;
  }
  return out;
}

std::int64_t parse_int(const std::string& s, const char* what) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError(std::string("bad ") + what + " '" + s + "'");
  return v;
}

std::vector<Item> load_items(const Options& o, bool need_sweep) {
  std::vector<Item> items;
  for (const auto& name : o.suites) {
    const auto suite = load_suite(resolve(name, "suites", "suite"));
    for (const auto& e : suite.entries) items.push_back({suite.name, e});
  }
  if (need_sweep && o.sweep.empty()) throw UsageError("sweep needs --sweep min,max,count");
  if (!o.sweep.empty()) {
    std::vector<std::string> parts;
    std::stringstream ss(o.sweep);
    for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("--sweep expects min,max,count");
    const auto lo = parse_int(parts[0], "sweep minimum");
    const auto hi = parse_int(parts[1], "sweep maximum");
    const auto count = parse_int(parts[2], "sweep count");
    if (count < 1) throw InvariantError("sweep count must be >= 1");
    for (auto g : synthetic_sweep(lo, hi, static_cast<std::size_t>(count), o.seed)) {
      items.push_back({"sweep", {GemmShape(o.fix_m.value_or(g.m), o.fix_n.value_or(g.n),
                                           o.fix_k.value_or(g.k), g.bit_precision),
                                 1}});
    }
  } else if (o.fix_m || o.fix_n || o.fix_k) {
    throw UsageError("--fix-m/--fix-n/--fix-k apply to --sweep only");
  }
  if (items.empty()) throw UsageError("no workload given (use --suite or --sweep)");
  return items;
}

struct Outcome {
  std::optional<Metrics> metrics;  // nullopt: the heuristic found nothing valid
  double map_seconds = 0;
};

HeuristicOptions heuristic_options(const Options& o) {
  HeuristicOptions h;
  h.seed = o.seed;
  h.invalid_limit = o.invalid_limit;
  h.victory_limit = o.victory_limit;
  h.max_samples = o.max_samples;
  return h;
}

Outcome run_one(const GemmShape& g, const SystemConfig& cfg, MapperMode mode, const HeuristicOptions& h) {
  const auto t0 = std::chrono::steady_clock::now();
  std::optional<Mapping> mapping;
  if (mode == MapperMode::Priority) {
    mapping = map_gemm(g, cfg);
  } else {
    mapping = heuristic_search(g, cfg, h).best;
  }
  Outcome out;
  out.map_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (mapping) out.metrics = evaluate_mapping(*mapping, g, cfg);
  return out;
}

// Results land at their own index, so output order never depends on
// scheduling. The lowest-index failure is rethrown.
template <typename F>
void parallel_for(std::size_t n, unsigned jobs, F&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

unsigned job_count(const Options& o) {
  if (o.jobs > 0) return o.jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

struct Pair {
  std::size_t config;
  MapperMode mode;
};

// outcomes[item * pairs.size() + p]
std::vector<Outcome> run_all(const std::vector<Item>& items, const std::vector<NamedConfig>& cfgs,
                             const std::vector<Pair>& pairs, const Options& o, std::ostream& log) {
  const auto h = heuristic_options(o);
  std::vector<Outcome> out(items.size() * pairs.size());
  const auto t0 = std::chrono::steady_clock::now();
  parallel_for(out.size(), job_count(o), [&](std::size_t i) {
    const auto& pair = pairs[i % pairs.size()];
    out[i] = run_one(items[i / pairs.size()].entry.shape, cfgs[pair.config].config, pair.mode, h);
  });
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.quiet) {
    std::map<std::string, std::pair<std::size_t, double>> by_mode;
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto& slot = by_mode[mode_name(pairs[i % pairs.size()].mode)];
      ++slot.first;
      slot.second += out[i].map_seconds;
    }
    for (const auto& [mode, s] : by_mode) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "mapper %s: %zu mappings, %.3f s mapping time\n", mode.c_str(), s.first,
                    s.second);
      log << buf;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "wall clock: %.3f s, threads=%u\n", wall, job_count(o));
    log << buf;
  }
  return out;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Exact decimal picojoules from integer femtojoules.
std::string pj_string(Energy e) {
  Int128 fj = e.fj();
  const bool neg = fj < 0;
  if (neg) fj = -fj;
  std::string digits;
  do {
    digits.push_back(static_cast<char>('0' + static_cast<int>(fj % 10)));
    fj /= 10;
  } while (fj != 0);
  while (digits.size() < 4) digits.push_back('0');
  std::reverse(digits.begin(), digits.end());
  digits.insert(digits.size() - 3, ".");
  return neg ? "-" + digits : digits;
}

std::string header_line(const char* command, const Options& o) {
  std::string h = std::string("# cimdse ") + command + " v1; seed=" + std::to_string(o.seed) +
                  "; mapper=" + o.mapper;
  if (o.mapper == "heuristic" || o.reference_mapper == "heuristic") {
    h += "; invalid_limit=" + std::to_string(o.invalid_limit) +
         "; victory_limit=" + std::to_string(o.victory_limit) +
         "; max_samples=" + std::to_string(o.max_samples);
  }
  return h;
}

json header_json(const char* command, const Options& o) {
  json j;
  j["schema"] = std::string("cimdse.") + command + "/1";
  j["seed"] = o.seed;
  j["mapper"] = o.mapper;
  if (o.mapper == "heuristic" || o.reference_mapper == "heuristic") {
    j["invalid_limit"] = o.invalid_limit;
    j["victory_limit"] = o.victory_limit;
    j["max_samples"] = o.max_samples;
  }
  return j;
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw IoError("cannot open output file " + o.out);
  f << text;
  f.flush();
  if (!f) throw IoError("cannot write output file " + o.out);
}

int cmd_metrics(const Options& o, bool sweep, std::ostream& out, std::ostream& log) {
  const auto cfgs = load_configs(o);
  const auto items = load_items(o, sweep);
  const auto mode = parse_mode(o.mapper);
  std::vector<Pair> pairs;
  for (std::size_t c = 0; c < cfgs.size(); ++c) pairs.push_back({c, mode});
  const auto outcomes = run_all(items, cfgs, pairs, o, log);
  const char* command = sweep ? "sweep" : "evaluate";

  std::string text;
  if (o.format == "json") {
    json doc = header_json(command, o);
    doc["rows"] = json::array();
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& item = items[i / pairs.size()];
      const auto& g = item.entry.shape;
      json row{{"suite", item.suite},
               {"gemm_m", g.m},
               {"gemm_n", g.n},
               {"gemm_k", g.k},
               {"bit_precision", g.bit_precision},
               {"count", item.entry.count},
               {"config", cfgs[pairs[i % pairs.size()].config].config.name}};
      if (const auto& m = outcomes[i].metrics) {
        row["tops_per_w"] = m->tops_per_w;
        row["gflops"] = m->gflops;
        row["utilization"] = to_double(m->utilization);
        row["total_pJ"] = m->energy.total.pj();
        row["total_cycles"] = m->cycles.total_cycles;
        row["compute_cycles"] = m->cycles.compute_cycles;
        row["memory_cycles"] = m->cycles.memory_cycles;
        row["bound"] = m->cycles.memory_bound() ? "memory" : "compute";
      } else {
        for (const char* k : {"tops_per_w", "gflops", "utilization", "total_pJ", "total_cycles",
                              "compute_cycles", "memory_cycles"}) {
          row[k] = nullptr;
        }
        row["bound"] = "unmapped";
      }
      doc["rows"].push_back(std::move(row));
    }
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream s;
    s << header_line(command, o) << "\n"
      << "suite,gemm_m,gemm_n,gemm_k,bit_precision,count,config,tops_per_w,gflops,utilization,"
         "total_pJ,total_cycles,compute_cycles,memory_cycles,bound\n";
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& item = items[i / pairs.size()];
      const auto& g = item.entry.shape;
      s << item.suite << ',' << g.m << ',' << g.n << ',' << g.k << ',' << g.bit_precision << ','
        << item.entry.count << ',' << cfgs[pairs[i % pairs.size()].config].config.name << ',';
      if (const auto& m = outcomes[i].metrics) {
        s << fixed(m->tops_per_w, 6) << ',' << fixed(m->gflops, 3) << ','
          << fixed(to_double(m->utilization), 6) << ',' << pj_string(m->energy.total) << ','
          << m->cycles.total_cycles << ',' << m->cycles.compute_cycles << ',' << m->cycles.memory_cycles
          << ',' << (m->cycles.memory_bound() ? "memory" : "compute") << '\n';
      } else {
        s << ",,,,,,,unmapped\n";
      }
    }
    text = s.str();
  }
  write_output(o, text, out);
  return kOk;
}

std::size_t find_reference(const std::vector<NamedConfig>& cfgs, const std::string& ref) {
  if (ref.empty()) return 0;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    if (cfgs[i].label == ref || cfgs[i].config.name == ref) return i;
  }
  throw UsageError("--reference '" + ref + "' is not among the given configurations");
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& log) {
  const auto cfgs = load_configs(o);
  const auto items = load_items(o, false);
  const auto mode = parse_mode(o.mapper);
  const auto ref_mode = o.reference_mapper.empty() ? mode : parse_mode(o.reference_mapper);
  const std::size_t ref = find_reference(cfgs, o.reference);

  // pairs[0] is the reference; the rest are compared against it.
  std::vector<Pair> pairs{{ref, ref_mode}};
  for (std::size_t c = 0; c < cfgs.size(); ++c) {
    if (c != ref || mode != ref_mode) pairs.push_back({c, mode});
  }
  if (pairs.size() < 2) throw UsageError("compare needs two configurations or two mapper modes");
  const auto outcomes = run_all(items, cfgs, pairs, o, log);

  struct RatioRow {
    std::size_t item, pair;
    MetricRatios r;
  };
  std::vector<RatioRow> rows;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& base = outcomes[i * pairs.size()].metrics;
    for (std::size_t p = 1; p < pairs.size(); ++p) {
      const auto& cand = outcomes[i * pairs.size() + p].metrics;
      if (base && cand) rows.push_back({i, p, ratio(*cand, *base)});
    }
  }

  // Per suite in order of appearance, plus "*" over everything when mixed.
  std::vector<std::string> groups;
  for (const auto& it : items) {
    if (std::find(groups.begin(), groups.end(), it.suite) == groups.end()) groups.push_back(it.suite);
  }
  if (groups.size() > 1) groups.push_back("*");
  struct SummaryRow {
    std::string group;
    std::size_t pair;
    const char* metric;
    std::size_t n;
    RatioSummary s;
  };
  std::vector<SummaryRow> summary;
  for (const auto& group : groups) {
    for (std::size_t p = 1; p < pairs.size(); ++p) {
      std::array<std::vector<double>, 3> vals;
      for (const auto& r : rows) {
        if (r.pair != p || (group != "*" && items[r.item].suite != group)) continue;
        vals[0].push_back(r.r.tops_per_w);
        vals[1].push_back(r.r.gflops);
        vals[2].push_back(r.r.utilization);
      }
      if (vals[0].empty()) continue;
      const char* names[3] = {"tops_per_w", "gflops", "utilization"};
      for (int k = 0; k < 3; ++k) summary.push_back({group, p, names[k], vals[k].size(), summarize(vals[k])});
    }
  }

  const std::string& ref_name = cfgs[ref].config.name;
  auto cfg_name = [&](std::size_t p) -> const std::string& { return cfgs[pairs[p].config].config.name; };
  std::string text;
  if (o.format == "json") {
    json doc = header_json("compare", o);
    doc["reference"] = ref_name;
    doc["reference_mapper"] = mode_name(ref_mode);
    doc["rows"] = json::array();
    for (const auto& r : rows) {
      const auto& item = items[r.item];
      const auto& g = item.entry.shape;
      doc["rows"].push_back({{"suite", item.suite},
                             {"gemm_m", g.m},
                             {"gemm_n", g.n},
                             {"gemm_k", g.k},
                             {"bit_precision", g.bit_precision},
                             {"count", item.entry.count},
                             {"config", cfg_name(r.pair)},
                             {"mapper", mode_name(pairs[r.pair].mode)},
                             {"tops_per_w_ratio", r.r.tops_per_w},
                             {"gflops_ratio", r.r.gflops},
                             {"utilization_ratio", r.r.utilization}});
    }
    doc["summary"] = json::array();
    for (const auto& s : summary) {
      doc["summary"].push_back({{"suite", s.group},
                                {"config", cfg_name(s.pair)},
                                {"mapper", mode_name(pairs[s.pair].mode)},
                                {"metric", s.metric},
                                {"n", s.n},
                                {"mean", s.s.mean},
                                {"stddev", s.s.stddev},
                                {"geomean", s.s.geomean},
                                {"min", s.s.min},
                                {"max", s.s.max}});
    }
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream s;
    s << header_line("compare", o) << "; reference=" << ref_name << "; reference_mapper=" << mode_name(ref_mode)
      << "\n"
      << "suite,gemm_m,gemm_n,gemm_k,bit_precision,count,config,mapper,tops_per_w_ratio,gflops_ratio,"
         "utilization_ratio\n";
    for (const auto& r : rows) {
      const auto& item = items[r.item];
      const auto& g = item.entry.shape;
      s << item.suite << ',' << g.m << ',' << g.n << ',' << g.k << ',' << g.bit_precision << ','
        << item.entry.count << ',' << cfg_name(r.pair) << ',' << mode_name(pairs[r.pair].mode) << ','
        << fixed(r.r.tops_per_w, 6) << ',' << fixed(r.r.gflops, 6) << ',' << fixed(r.r.utilization, 6) << '\n';
    }
    s << "\n# summary\nsuite,config,mapper,metric,n,mean,stddev,geomean,min,max\n";
    for (const auto& x : summary) {
      s << x.group << ',' << cfg_name(x.pair) << ',' << mode_name(pairs[x.pair].mode) << ',' << x.metric << ','
        << x.n << ',' << fixed(x.s.mean, 6) << ',' << fixed(x.s.stddev, 6) << ',' << fixed(x.s.geomean, 6) << ','
        << fixed(x.s.min, 6) << ',' << fixed(x.s.max, 6) << '\n';
    }
    text = s.str();
  }
  write_output(o, text, out);
  return kOk;
}

int cmd_suites_list(const Options& o, std::ostream& out) {
  const fs::path dir = data_dir() / "suites";
  if (!fs::is_directory(dir)) throw IoError("no suite directory at " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string text;
  json list = json::array();
  std::ostringstream s;
  s << "suite,entries,gemms\n";
  for (const auto& f : files) {
    const auto suite = load_suite(f);
    std::int64_t gemms = 0;
    for (const auto& e : suite.entries) gemms += e.count;
    list.push_back({{"suite", suite.name}, {"entries", suite.entries.size()}, {"gemms", gemms}});
    s << suite.name << ',' << suite.entries.size() << ',' << gemms << '\n';
  }
  text = o.format == "json" ? list.dump(2) + "\n" : s.str();
  write_output(o, text, out);
  return kOk;
}

void add_output_options(CLI::App* app, Options& o) {
  app->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", o.out, "Write results to this file instead of stdout");
}

void add_run_options(CLI::App* app, Options& o) {
  app->add_option("--config", o.configs, "System configuration file or bundled name (repeatable)");
  app->add_option("--primitive", o.primitives,
                  "CiM primitive file or bundled name; builds one config per --placement (repeatable)");
  app->add_option("--placement", o.placements, "cim_rf, cim_smem_configA, cim_smem_configB or baseline")
      ->check(CLI::IsMember({"baseline", "cim_rf", "cim_smem_configA", "cim_smem_configB"}));
  app->add_option("--base", o.base, "Baseline configuration for --primitive (default: bundled baseline)");
  app->add_option("--suite", o.suites, "Workload suite file or bundled name (repeatable)");
  app->add_option("--sweep", o.sweep, "Synthetic powers-of-two sweep: min,max,count");
  app->add_option("--fix-m", o.fix_m, "Hold M fixed across the sweep")->check(CLI::PositiveNumber);
  app->add_option("--fix-n", o.fix_n, "Hold N fixed across the sweep")->check(CLI::PositiveNumber);
  app->add_option("--fix-k", o.fix_k, "Hold K fixed across the sweep")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "Seed for sweeps and the heuristic mapper");
  app->add_option("--mapper", o.mapper, "Mapping strategy")->check(CLI::IsMember({"priority", "heuristic"}));
  app->add_option("--memory-cycles", o.memory_cycles, "Override how link cycles combine")
      ->check(CLI::IsMember({"max", "sum"}));
  app->add_option("--jobs", o.jobs, "Worker threads (default: all cores)");
  app->add_option("--invalid-limit", o.invalid_limit, "Heuristic: stop after this many invalid samples in a row");
  app->add_option("--victory-limit", o.victory_limit,
                  "Heuristic: stop after this many non-improving valid samples in a row (0: off)");
  app->add_option("--max-samples", o.max_samples, "Heuristic: total sample cap (0: off)");
  app->add_flag("--quiet", o.quiet, "Do not log mapper timing");
  add_output_options(app, o);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& log) {
  Options o;
  CLI::App app{"CiM integration design-space evaluator", "cimdse"};
  app.require_subcommand(1);
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate every GEMM on every configuration");
  auto* sweep = app.add_subcommand("sweep", "Evaluate a synthetic GEMM sweep");
  auto* compare = app.add_subcommand("compare", "Per-GEMM ratios against a reference configuration or mapper");
  auto* suites = app.add_subcommand("suites", "Bundled workload suites");
  auto* list = suites->add_subcommand("list", "List bundled suites");
  suites->require_subcommand(1);
  add_run_options(evaluate, o);
  add_run_options(sweep, o);
  add_run_options(compare, o);
  compare->add_option("--reference", o.reference, "Reference configuration (default: the first)");
  compare->add_option("--reference-mapper", o.reference_mapper, "Mapper for the reference (default: --mapper)")
      ->check(CLI::IsMember({"priority", "heuristic"}));
  add_output_options(list, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, log) == 0 ? kOk : kParse;
  }

  try {
    if (evaluate->parsed()) return cmd_metrics(o, false, out, log);
    if (sweep->parsed()) return cmd_metrics(o, true, out, log);
    if (compare->parsed()) return cmd_compare(o, out, log);
    if (list->parsed()) return cmd_suites_list(o, out);
  } catch (const UsageError& e) {
    log << "error: " << e.what() << "\n";
    return kParse;
  } catch (const ParseError& e) {
    log << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const InvariantError& e) {
    log << "invalid input: " << e.what() << "\n";
    return kInvariant;
  } catch (const IoError& e) {
    log << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    log << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace cimdse::cli
