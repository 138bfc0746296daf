#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "cimdse/archspec.hpp"
#include "cimdse/costmodel.hpp"
#include "cimdse/mapping.hpp"
#include "cimdse/workload.hpp"

namespace cimdse::testing {

/// Per-level element reads/writes obtained by stepping through every loop
/// iteration and counting tile deliveries whenever a tensor's tile changes.
std::vector<LevelAccesses> simulate_accesses(const Mapping& mapping, const GemmShape& g,
                                             const SystemConfig& cfg);

/// Random mapping drawn until validate_mapping accepts it; nullopt after
/// `attempts` rejections. Factors need not divide the dimensions.
std::optional<Mapping> random_valid_mapping(std::mt19937_64& rng, const GemmShape& g,
                                            const SystemConfig& cfg, int attempts = 200);

/// Best CiM utilization over every partition and spatial tile that admits a
/// valid mapping (checked with all temporal loops at main memory).
Rational exhaustive_max_utilization(const GemmShape& g, const SystemConfig& cfg);

/// The bundled calibration primitive, built in code.
CimPrimitiveSpec fixture_primitive();

/// Single-primitive CiM config at RF on the default template.
SystemConfig single_primitive_config(const CimPrimitiveSpec& prim);

}  // namespace cimdse::testing
