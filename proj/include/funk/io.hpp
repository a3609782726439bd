#pragma once

// Text formats. Every real number is written with 17 significant digits so a
// write/read cycle is bit-exact.
//
//   transform grid   CSV  nu,tau,Ff,Cf,Sf    (tau fastest) + JSON sidecar
//                    sidecar: {"pole": [x, y, z], "nu_count", "tau_count", "circle_nodes"}
//   field samples    CSV  nu,tau,value       (nu in [0, pi] including both poles, tau fastest)
//                    optional sidecar {"pole": [x, y, z]}
//   coefficients     JSON {"even": {"2k": [[num, den], ...]}, "odd": {"2k-1": [...]}, "metadata": {...}}

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "funk/coefficients.hpp"
#include "funk/inversion.hpp"
#include "funk/sphere_field.hpp"
#include "funk/transforms.hpp"

namespace funk {

std::string format_real(double v);

/// Sidecar path for a CSV: same stem, ".json" extension.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

void write_grid_csv(const TransformGrid& grid, std::ostream& out);
nlohmann::ordered_json grid_sidecar(const TransformGrid& grid);
/// CSV plus sidecar. Throws Io when a file cannot be written.
void write_grid(const TransformGrid& grid, const std::filesystem::path& csv);

/// Reads the CSV and, if present, its sidecar (pole defaults to N otherwise).
/// Throws Io for unreadable files or malformed rows.
TransformGrid read_grid(const std::filesystem::path& csv);
TransformGrid read_grid_csv(std::istream& in, const UnitVector& pole = north_pole(),
                            int circle_nodes = kDefaultCircleNodes);

FieldGrid read_field_csv(const std::filesystem::path& csv);
void write_field_csv(const FieldGrid& grid, std::ostream& out);

/// Exact coefficient export; `samples` > 0 adds P_n^0, P_n^1 at u_i = i (pi/2) / samples.
nlohmann::ordered_json coefficients_json(const CoeffTable& table, int samples = 0);

nlohmann::ordered_json report_json(const ReconstructionReport& report);

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out);

/// Writes text to `path`, or to `fallback` when path is empty. Throws Io.
void write_text(const std::string& text, const std::filesystem::path& path, std::ostream& fallback);

}  // namespace funk
