#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "blowup/certifier.hpp"
#include "blowup/mcgehee.hpp"
#include "blowup/morales.hpp"
#include "blowup/potential.hpp"

namespace blowup {

// JSON output. Numbers are printed with 17 significant digits; non-finite
// values become null. Output is deterministic for identical inputs.

std::string to_json(const PotentialSpec& spec);
std::string to_json(const Certificate& cert);
std::string to_json(const SweepResult& result);
std::string to_json(const EquilibriaReport& report);
std::string to_json(const std::vector<MrComparison>& entries);
std::string to_json(const ManifoldTrace& trace);

/// Parses a potential spec document. Schema problems raise SchemaViolation
/// with the offending field path, e.g. "$.params.alpha: expected a number".
PotentialSpec parse_spec(std::string_view json_text);
/// Reads and parses a spec file; IoError when it cannot be read.
PotentialSpec load_spec(const std::string& path);

/// Applies "name=value" to spec.params.
void apply_override(PotentialSpec& spec, std::string_view assignment);

/// Trajectory CSV: header tau,t,r,theta,v,w,z,h and one row per sample.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace blowup
