#pragma once

// File outputs: ASCII legacy VTK (wake mesh as POLYDATA, vorticity grid as
// STRUCTURED_POINTS), CSV tables and JSON manifests. Floating-point values are
// written as the shortest decimal string that round-trips.

#include "wakegait/config.hpp"
#include "wakegait/gait_opt.hpp"
#include "wakegait/simulation.hpp"
#include "wakegait/wake.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace wakegait {

std::string format_double(double v);

void write_wake_vtk(std::ostream& out, const WakeStructure& wake);
void write_wake_vtk(const std::filesystem::path& path, const WakeStructure& wake);

/// Reads the points, quad polygons and the optional `phase` scalar of a
/// legacy ASCII POLYDATA file. Rows/strips are inferred from the faces when
/// they form a regular lattice, else left at zero.
WakeStructure read_wake_vtk(const std::filesystem::path& path);

void write_field_vtk(std::ostream& out, const FieldGrid& grid,
                     const std::vector<double>& iso_thresholds);
void write_field_vtk(const std::filesystem::path& path, const FieldGrid& grid,
                     const std::vector<double>& iso_thresholds);

struct FieldFile {
    std::array<int, 3> dims{};
    Vec3 origin = Vec3::Zero();
    Vec3 spacing = Vec3::Zero();
    std::vector<double> omega_x;
    std::vector<double> iso_thresholds;
};
FieldFile read_field_vtk(const std::filesystem::path& path);

struct CirculationHistory {
    std::vector<double> times;
    std::vector<double> stations;
    std::vector<std::vector<double>> gamma;  // per time
};

CirculationHistory circulation_history(const SimulationResult& result);
void write_circulation_csv(const std::filesystem::path& path, const CirculationHistory& h);
CirculationHistory read_circulation_csv(const std::filesystem::path& path);

void write_slice_csv(const std::filesystem::path& path, const std::vector<SlicePoint>& points);

void write_opt_history_csv(const std::filesystem::path& path, const OptResult& result,
                           const DesignSpace& space);
nlohmann::ordered_json opt_result_json(const OptResult& result, const DesignSpace& space);

nlohmann::ordered_json stroke_json(const StrokeVorticity& s);

/// Config echo, versions and invariant summary of a run.
nlohmann::ordered_json run_manifest(const SimConfig& config, const SimulationResult& result);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

/// Outputs of `simulate` (and `field` with `with_field`). Returns the written paths.
std::vector<std::filesystem::path> export_outputs(const SimConfig& config,
                                                  const SimulationResult& result,
                                                  const std::filesystem::path& dir,
                                                  bool with_field);

inline constexpr const char* version_string = "0.1.0";

}  // namespace wakegait
