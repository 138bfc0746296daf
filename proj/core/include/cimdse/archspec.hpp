#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cimdse/units.hpp"

namespace cimdse {

enum class CimKind { Analog, Digital };
enum class CellType { Sram6T, Sram8T, Other };

/// A CiM macro seen as r_p x c_p parallel units, each serially performing
/// r_h x c_h MACs. K maps onto rows, N onto columns.
struct CimPrimitiveSpec {
  std::string name;
  CimKind kind = CimKind::Digital;
  CellType cell = CellType::Sram6T;
  std::int64_t r_p = 1;
  std::int64_t c_p = 1;
  std::int64_t r_h = 1;
  std::int64_t c_h = 1;
  Energy energy_per_mac;
  std::int64_t cycles_per_step = 1;
  Rational area_overhead{1};
  int weight_bits_per_cell = 1;

  std::int64_t rows() const { return r_p * r_h; }      // weight rows (K)
  std::int64_t columns() const { return c_p * c_h; }   // weight columns (N)
  std::int64_t weight_capacity() const { return rows() * columns(); }
  std::int64_t mac_units() const { return r_p * c_p * r_h * c_h; }
  std::int64_t storage_bytes(int bit_precision) const {
    return weight_capacity() * bit_precision / 8;
  }

  void validate() const;
};

struct MemoryLevelSpec {
  std::string name;
  std::optional<std::int64_t> capacity_bytes;  // nullopt = unbounded
  Rational bandwidth_bytes_per_cycle{1};
  Energy access_energy;                        // per access
  std::int64_t access_width_bytes = 1;         // bytes covered by one access

  bool unbounded() const { return !capacity_bytes.has_value(); }
};

struct BaselineEngine {
  std::int64_t array_rows = 16;
  std::int64_t array_cols = 16;
  std::int64_t subcores = 4;
  Energy mac_energy = Energy::from_fj(260);

  std::int64_t mac_units() const { return array_rows * array_cols * subcores; }
};

struct CimEngine {
  CimPrimitiveSpec primitive;
  std::string at_level;
  std::int64_t primitive_count = 1;
};

using Engine = std::variant<BaselineEngine, CimEngine>;

enum class MemoryCycleMode { MaxOverLinks, SumOverLinks };

/// Memory chain, outermost (DRAM) first, and the compute engine placement.
/// The innermost level is the operand buffer next to the datapath (PEBUF);
/// it is priced but never holds a mapped tile.
struct SystemConfig {
  std::string name;
  std::vector<MemoryLevelSpec> levels;
  Engine engine = BaselineEngine{};
  Rational clock_ghz{1};
  Energy reduction_energy = Energy::from_fj(50);
  MemoryCycleMode memory_cycles = MemoryCycleMode::MaxOverLinks;

  bool is_cim() const { return std::holds_alternative<CimEngine>(engine); }
  const CimEngine& cim() const { return std::get<CimEngine>(engine); }
  const BaselineEngine& baseline() const { return std::get<BaselineEngine>(engine); }

  const MemoryLevelSpec& level(std::string_view name) const;
  std::size_t level_index(std::string_view name) const;
  const MemoryLevelSpec& operand_buffer() const { return levels.back(); }

  /// Levels that hold mapped tiles, outermost first. For CiM these are the
  /// levels strictly above the CiM placement; for the baseline, every level
  /// except the operand buffer.
  std::vector<const MemoryLevelSpec*> buffer_levels() const;

  std::int64_t total_mac_units() const;

  /// Throws InvariantError describing the first broken invariant.
  void validate() const;
};

enum class Placement { Baseline, CimRf, CimSmemConfigA, CimSmemConfigB };

std::string to_string(Placement p);
Placement parse_placement(std::string_view text);

/// floor(capacity / (primitive weight storage * area overhead)).
/// Throws InvariantError on an unbounded level or when the result is 0.
std::int64_t iso_area_count(const MemoryLevelSpec& level, const CimPrimitiveSpec& prim,
                            int bit_precision = 8);

/// Derives a placement from a baseline template holding DRAM, SMEM, RF, PEBUF.
SystemConfig build_config(const SystemConfig& base, Placement placement,
                          const CimPrimitiveSpec* prim, int bit_precision = 8);

/// The 45nm, 1 GHz single-SM template with the tensor-core-like engine.
SystemConfig default_template();

CimPrimitiveSpec parse_primitive(std::string_view json_text, const std::string& origin = "<primitive>");
CimPrimitiveSpec load_primitive(const std::filesystem::path& path);
std::string primitive_to_json(const CimPrimitiveSpec& prim);

SystemConfig parse_config(std::string_view json_text, const std::string& origin = "<config>");
SystemConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const SystemConfig& cfg);

}  // namespace cimdse
