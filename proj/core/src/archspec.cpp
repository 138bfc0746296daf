#include "cimdse/archspec.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "cimdse/error.hpp"
#include "json_util.hpp"

namespace cimdse {

using detail::json;

void CimPrimitiveSpec::validate() const {
  if (r_p < 1 || c_p < 1 || r_h < 1 || c_h < 1) {
    throw InvariantError("primitive '" + name + "': parallel and hold factors must be >= 1");
  }
  if (energy_per_mac <= Energy{}) {
    throw InvariantError("primitive '" + name + "': energy_per_mac must be > 0");
  }
  if (cycles_per_step < 1) {
    throw InvariantError("primitive '" + name + "': cycles_per_step must be >= 1");
  }
  if (area_overhead < Rational(1)) {
    throw InvariantError("primitive '" + name + "': area_overhead must be >= 1");
  }
  if (weight_bits_per_cell < 1) {
    throw InvariantError("primitive '" + name + "': weight_bits_per_cell must be >= 1");
  }
}

const MemoryLevelSpec& SystemConfig::level(std::string_view n) const {
  return levels.at(level_index(n));
}

std::size_t SystemConfig::level_index(std::string_view n) const {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].name == n) return i;
  }
  throw InvariantError("config '" + name + "' has no level named '" + std::string(n) + "'");
}

std::vector<const MemoryLevelSpec*> SystemConfig::buffer_levels() const {
  std::size_t end = is_cim() ? level_index(cim().at_level) : levels.size() - 1;
  std::vector<const MemoryLevelSpec*> out;
  for (std::size_t i = 0; i < end; ++i) out.push_back(&levels[i]);
  return out;
}

std::int64_t SystemConfig::total_mac_units() const {
  if (is_cim()) return cim().primitive_count * cim().primitive.mac_units();
  return baseline().mac_units();
}

void SystemConfig::validate() const {
  if (levels.size() < 2) {
    throw InvariantError("config '" + name + "': need at least a main memory and an operand buffer");
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& l = levels[i];
    if (!names.insert(l.name).second) {
      throw InvariantError("config '" + name + "': duplicate level '" + l.name + "'");
    }
    if (l.unbounded() && i != 0) {
      throw InvariantError("config '" + name + "': only the outermost level may be unbounded");
    }
    if (l.capacity_bytes && *l.capacity_bytes < 1) {
      throw InvariantError("config '" + name + "': level '" + l.name + "' capacity must be >= 1");
    }
    if (l.bandwidth_bytes_per_cycle <= Rational(0)) {
      throw InvariantError("config '" + name + "': level '" + l.name + "' bandwidth must be > 0");
    }
    if (l.access_width_bytes < 1) {
      throw InvariantError("config '" + name + "': level '" + l.name + "' access width must be >= 1");
    }
    if (l.access_energy < Energy{}) {
      throw InvariantError("config '" + name + "': level '" + l.name + "' access energy must be >= 0");
    }
    if (i > 0 && levels[i - 1].capacity_bytes && l.capacity_bytes &&
        *l.capacity_bytes > *levels[i - 1].capacity_bytes) {
      throw InvariantError("config '" + name + "': capacities must not grow toward compute ('" +
                           l.name + "')");
    }
  }
  if (clock_ghz <= Rational(0)) throw InvariantError("config '" + name + "': clock must be > 0");
  if (reduction_energy < Energy{}) {
    throw InvariantError("config '" + name + "': reduction energy must be >= 0");
  }
  if (is_cim()) {
    const auto& c = cim();
    c.primitive.validate();
    if (c.at_level != "RF" && c.at_level != "SMEM") {
      throw InvariantError("config '" + name + "': CiM must sit at RF or SMEM, not '" +
                           c.at_level + "'");
    }
    auto idx = level_index(c.at_level);
    if (idx == 0 || idx + 1 >= levels.size()) {
      throw InvariantError("config '" + name + "': CiM level needs a parent and an operand buffer");
    }
    if (c.primitive_count < 1) {
      throw InvariantError("config '" + name + "': primitive_count must be >= 1");
    }
  } else {
    const auto& b = baseline();
    if (b.array_rows < 1 || b.array_cols < 1 || b.subcores < 1) {
      throw InvariantError("config '" + name + "': PE array dimensions must be >= 1");
    }
  }
}

std::string to_string(Placement p) {
  switch (p) {
    case Placement::Baseline: return "baseline";
    case Placement::CimRf: return "cim_rf";
    case Placement::CimSmemConfigA: return "cim_smem_configA";
    case Placement::CimSmemConfigB: return "cim_smem_configB";
  }
  return "?";
}

Placement parse_placement(std::string_view text) {
  for (auto p : {Placement::Baseline, Placement::CimRf, Placement::CimSmemConfigA,
                 Placement::CimSmemConfigB}) {
    if (text == to_string(p)) return p;
  }
  throw InvariantError("unknown placement '" + std::string(text) + "'");
}

std::int64_t iso_area_count(const MemoryLevelSpec& level, const CimPrimitiveSpec& prim, int bp) {
  if (level.unbounded()) {
    throw InvariantError("iso-area count needs a finite capacity at '" + level.name + "'");
  }
  // capacity / (storage * overhead), floored, in exact arithmetic.
  Rational per_primitive = Rational(prim.storage_bytes(bp)) * prim.area_overhead;
  Rational q = Rational(*level.capacity_bytes) / per_primitive;
  std::int64_t count = q.numerator() / q.denominator();
  if (count < 1) {
    throw InvariantError("primitive '" + prim.name + "' does not fit in level '" + level.name +
                         "' under the iso-area constraint");
  }
  return count;
}

SystemConfig build_config(const SystemConfig& base, Placement placement,
                          const CimPrimitiveSpec* prim, int bp) {
  SystemConfig cfg = base;
  if (placement == Placement::Baseline) {
    if (!base.is_cim()) {
      cfg.engine = base.engine;
    } else {
      cfg.engine = BaselineEngine{};
    }
    cfg.name = "baseline";
    cfg.validate();
    return cfg;
  }
  if (prim == nullptr) throw InvariantError("placement " + to_string(placement) + " needs a primitive");
  prim->validate();
  CimEngine engine;
  engine.primitive = *prim;
  switch (placement) {
    case Placement::CimRf:
      engine.at_level = "RF";
      engine.primitive_count = iso_area_count(base.level("RF"), *prim, bp);
      break;
    case Placement::CimSmemConfigA:
      engine.at_level = "SMEM";
      engine.primitive_count = iso_area_count(base.level("RF"), *prim, bp);
      break;
    case Placement::CimSmemConfigB:
      engine.at_level = "SMEM";
      engine.primitive_count = iso_area_count(base.level("SMEM"), *prim, bp);
      break;
    case Placement::Baseline: break;
  }
  cfg.engine = engine;
  cfg.name = to_string(placement) + ":" + prim->name;
  cfg.validate();
  return cfg;
}

SystemConfig default_template() {
  SystemConfig cfg;
  cfg.name = "baseline";
  cfg.levels = {
      // Per-access energies of 64-bit words, except the byte-wide PE buffer.
      {"DRAM", std::nullopt, Rational(32), Energy::from_fj(512000), 8},
      {"SMEM", 256 * 1024, Rational(42), Energy::from_fj(124690), 8},
      {"RF", 4 * 4 * 1024, Rational(512), Energy::from_fj(11470), 8},
      {"PEBUF", 1024, Rational(1024), Energy::from_fj(20), 1},
  };
  cfg.engine = BaselineEngine{};
  return cfg;
}

// ---------------------------------------------------------------- JSON

namespace {

const char* kind_name(CimKind k) { return k == CimKind::Analog ? "analog" : "digital"; }

CimKind parse_kind(const std::string& s, const std::string& path) {
  if (s == "analog") return CimKind::Analog;
  if (s == "digital") return CimKind::Digital;
  throw ParseError(path, "kind must be 'analog' or 'digital'");
}

const char* cell_name(CellType c) {
  switch (c) {
    case CellType::Sram6T: return "sram6t";
    case CellType::Sram8T: return "sram8t";
    case CellType::Other: return "other";
  }
  return "other";
}

CellType parse_cell(const std::string& s, const std::string& path) {
  if (s == "sram6t") return CellType::Sram6T;
  if (s == "sram8t") return CellType::Sram8T;
  if (s == "other") return CellType::Other;
  throw ParseError(path, "cell must be 'sram6t', 'sram8t' or 'other'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CimPrimitiveSpec primitive_from(const json& doc, const std::string& path) {
  CimPrimitiveSpec p;
  p.name = detail::require_string(doc, "name", path);
  p.kind = parse_kind(detail::require_string(doc, "kind", path), path + ".kind");
  p.cell = parse_cell(detail::require_string(doc, "cell", path), path + ".cell");
  p.r_p = detail::require_int(doc, "r_p", path);
  p.c_p = detail::require_int(doc, "c_p", path);
  p.r_h = detail::require_int(doc, "r_h", path);
  p.c_h = detail::require_int(doc, "c_h", path);
  p.energy_per_mac = detail::as_energy_pj(detail::require(doc, "energy_per_mac_pJ", path),
                                          path + ".energy_per_mac_pJ");
  p.cycles_per_step = detail::require_int(doc, "cycles_per_step", path);
  p.area_overhead = detail::as_rational(detail::require(doc, "area_overhead", path),
                                        path + ".area_overhead");
  p.weight_bits_per_cell =
      static_cast<int>(detail::require_int(doc, "weight_bits_per_cell", path));
  try {
    p.validate();
  } catch (const InvariantError& e) {
    throw InvariantError(path + ": " + e.what());
  }
  return p;
}

json primitive_json(const CimPrimitiveSpec& p) {
  json doc;
  doc["name"] = p.name;
  doc["kind"] = kind_name(p.kind);
  doc["cell"] = cell_name(p.cell);
  doc["r_p"] = p.r_p;
  doc["c_p"] = p.c_p;
  doc["r_h"] = p.r_h;
  doc["c_h"] = p.c_h;
  doc["energy_per_mac_pJ"] = detail::energy_json(p.energy_per_mac);
  doc["cycles_per_step"] = p.cycles_per_step;
  doc["area_overhead"] = format_rational(p.area_overhead);
  doc["weight_bits_per_cell"] = p.weight_bits_per_cell;
  return doc;
}

}  // namespace

CimPrimitiveSpec parse_primitive(std::string_view text, const std::string& origin) {
  return primitive_from(detail::parse_json(text, origin), origin);
}

CimPrimitiveSpec load_primitive(const std::filesystem::path& path) {
  return parse_primitive(read_file(path), path.string());
}

std::string primitive_to_json(const CimPrimitiveSpec& prim) {
  return primitive_json(prim).dump(2) + "\n";
}

SystemConfig parse_config(std::string_view text, const std::string& origin) {
  json doc = detail::parse_json(text, origin);
  SystemConfig cfg;
  cfg.name = doc.contains("name") ? detail::require_string(doc, "name", origin) : "config";
  const auto& levels = detail::require(doc, "levels", origin);
  if (!levels.is_array()) throw ParseError(origin + ".levels", "expected an array");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string path = origin + ".levels[" + std::to_string(i) + "]";
    const auto& l = levels[i];
    MemoryLevelSpec spec;
    spec.name = detail::require_string(l, "name", path);
    const auto& cap = detail::require(l, "capacity_bytes", path);
    if (cap.is_string()) {
      if (cap.get<std::string>() != "inf") {
        throw ParseError(path + ".capacity_bytes", "expected an integer or \"inf\"");
      }
    } else {
      spec.capacity_bytes = detail::as_int(cap, path + ".capacity_bytes");
    }
    spec.bandwidth_bytes_per_cycle =
        detail::as_rational(detail::require(l, "bandwidth_Bpc", path), path + ".bandwidth_Bpc");
    spec.access_energy = detail::as_energy_pj(detail::require(l, "access_energy_pJ", path),
                                              path + ".access_energy_pJ");
    if (l.contains("access_width_bytes")) {
      spec.access_width_bytes = detail::require_int(l, "access_width_bytes", path);
    }
    cfg.levels.push_back(std::move(spec));
  }
  if (doc.contains("clock_ghz")) {
    cfg.clock_ghz = detail::as_rational(doc["clock_ghz"], origin + ".clock_ghz");
  }
  if (doc.contains("reduction_energy_pJ")) {
    cfg.reduction_energy =
        detail::as_energy_pj(doc["reduction_energy_pJ"], origin + ".reduction_energy_pJ");
  }
  if (doc.contains("memory_cycles")) {
    auto mode = detail::require_string(doc, "memory_cycles", origin);
    if (mode == "max") cfg.memory_cycles = MemoryCycleMode::MaxOverLinks;
    else if (mode == "sum") cfg.memory_cycles = MemoryCycleMode::SumOverLinks;
    else throw ParseError(origin + ".memory_cycles", "expected \"max\" or \"sum\"");
  }

  const auto& engine = detail::require(doc, "engine", origin);
  const std::string epath = origin + ".engine";
  const auto type = detail::require_string(engine, "type", epath);
  if (type == "baseline") {
    BaselineEngine b;
    if (engine.contains("array_rows")) b.array_rows = detail::require_int(engine, "array_rows", epath);
    if (engine.contains("array_cols")) b.array_cols = detail::require_int(engine, "array_cols", epath);
    if (engine.contains("subcores")) b.subcores = detail::require_int(engine, "subcores", epath);
    if (engine.contains("mac_energy_pJ")) {
      b.mac_energy = detail::as_energy_pj(engine["mac_energy_pJ"], epath + ".mac_energy_pJ");
    }
    cfg.engine = b;
  } else if (type == "cim") {
    const auto& p = detail::require(engine, "primitive", epath);
    CimPrimitiveSpec prim;
    if (p.is_string()) {
      std::filesystem::path ref = p.get<std::string>();
      if (ref.is_relative()) ref = std::filesystem::path(origin).parent_path() / ref;
      prim = load_primitive(ref);
    } else {
      prim = primitive_from(p, epath + ".primitive");
    }
    if (engine.contains("placement")) {
      auto placement = parse_placement(detail::require_string(engine, "placement", epath));
      SystemConfig base = cfg;
      base.engine = BaselineEngine{};
      auto keep_name = cfg.name;
      cfg = build_config(base, placement, &prim);
      if (doc.contains("name")) cfg.name = keep_name;
    } else {
      CimEngine c;
      c.primitive = prim;
      c.at_level = detail::require_string(engine, "at_level", epath);
      c.primitive_count = detail::require_int(engine, "primitive_count", epath);
      cfg.engine = c;
    }
  } else {
    throw ParseError(epath + ".type", "expected \"baseline\" or \"cim\"");
  }
  try {
    cfg.validate();
  } catch (const InvariantError& e) {
    throw InvariantError(origin + ": " + e.what());
  }
  return cfg;
}

SystemConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.string());
}

std::string config_to_json(const SystemConfig& cfg) {
  json doc;
  doc["name"] = cfg.name;
  doc["levels"] = json::array();
  for (const auto& l : cfg.levels) {
    json lj;
    lj["name"] = l.name;
    if (l.capacity_bytes) lj["capacity_bytes"] = *l.capacity_bytes;
    else lj["capacity_bytes"] = "inf";
    lj["bandwidth_Bpc"] = format_rational(l.bandwidth_bytes_per_cycle);
    lj["access_energy_pJ"] = detail::energy_json(l.access_energy);
    lj["access_width_bytes"] = l.access_width_bytes;
    doc["levels"].push_back(lj);
  }
  json e;
  if (cfg.is_cim()) {
    e["type"] = "cim";
    e["primitive"] = primitive_json(cfg.cim().primitive);
    e["at_level"] = cfg.cim().at_level;
    e["primitive_count"] = cfg.cim().primitive_count;
  } else {
    const auto& b = cfg.baseline();
    e["type"] = "baseline";
    e["array_rows"] = b.array_rows;
    e["array_cols"] = b.array_cols;
    e["subcores"] = b.subcores;
    e["mac_energy_pJ"] = detail::energy_json(b.mac_energy);
  }
  doc["engine"] = e;
  doc["clock_ghz"] = format_rational(cfg.clock_ghz);
  doc["reduction_energy_pJ"] = detail::energy_json(cfg.reduction_energy);
  doc["memory_cycles"] = cfg.memory_cycles == MemoryCycleMode::MaxOverLinks ? "max" : "sum";
  return doc.dump(2) + "\n";
}

}  // namespace cimdse
