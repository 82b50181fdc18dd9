#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "sgp/geometry.hpp"
#include "sgp/pencil.hpp"
#include "sgp/structure.hpp"

namespace sgp {

struct GeometryInput {
  PlatformGeometry geometry;
  std::optional<LegMeasurements> lengths;
};

// JSON object with "top" and "base" (6 x 3 arrays), optional "variant"
// ("66", "65", "6p6") and optional "L" (6 squared lengths).
GeometryInput parse_geometry_json(const std::string& text);
GeometryInput read_geometry_file(const std::string& path);

// Either a bare JSON array of 6 numbers or an object with key "L".
LegMeasurements parse_lengths_json(const std::string& text);
LegMeasurements read_lengths_file(const std::string& path);

std::string geometry_to_json(const PlatformGeometry& geom, const std::optional<LegMeasurements>& L);

// Doubles are written with 17 significant digits.
// Summary statistics always cover all 40 accepted roots; `real_only` only
// restricts which roots are listed.
void write_solution_json(std::ostream& os, const SolutionSet& sol, bool all_candidates, bool real_only = false);
void write_solution_csv(std::ostream& os, const SolutionSet& sol, bool all_candidates, bool real_only = false);

void write_structure_json(std::ostream& os, const TemplateStructure& s);

std::string fmt_double(double x);

}  // namespace sgp
