#pragma once

// Run configuration and its JSON schema.
//
// Every block is optional; omitted fields take the defaults below, which
// describe the baseline operating point (1 m/s forward flight, 2 Hz flapping,
// 0.15 m chord, 0.34 m tip-to-tip span). Unknown keys are rejected.
//
//   {
//     "wing":       { semispan_proximal, semispan_distal, chord_proximal,
//                     chord_distal, sweep_distal, n_elements_per_side },
//     "gait":       { mode, frequency, flap_amplitude, flap_offset, incidence,
//                     fold_amplitude, fold_phase, pitch_gain },
//     "flight":     { forward_speed, air_density, wind[3], body_mode, body_mass },
//     "simulation": { dt_per_cycle, n_cycles, n_warmup, n_keep_cycles,
//                     core_radius, downwash_mode, wake_mode },
//     "grid":       { lower[3], upper[3], dims[3], slice_x[], slice_dims[2],
//                     iso_thresholds[] },
//     "optimizer":  { fields[], lower[], upper[], x0[], budget, seed },
//     "output_dir": "..."
//   }
//
// Angles are radians. core_radius defaults to 5% of the mean chord.

#include "wakegait/aero.hpp"
#include "wakegait/morphology.hpp"
#include "wakegait/wake.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wakegait {

struct GridSpec {
    Vec3 lower{-0.1, -0.3, -0.3};
    Vec3 upper{0.9, 0.3, 0.3};
    std::array<int, 3> dims{60, 40, 40};
    std::vector<double> slice_x{0.5, 0.65, 0.8};
    std::array<int, 2> slice_dims{61, 61};
    std::vector<double> iso_thresholds{300.0, 100.0, -300.0, -100.0};
};

struct OptimizerSpec {
    std::vector<std::string> fields{"chord_proximal", "sweep_distal"};
    std::vector<double> lower{0.05, -1.0};
    std::vector<double> upper{0.30, 1.0};
    std::vector<double> x0;  // empty: use the config's own values
    int budget = 200;
    std::uint64_t seed = 0;
};

struct SimConfig {
    WingGeometry wing;
    GaitParams gait;

    double forward_speed = 1.0;  // m/s
    double air_density = 1.225;  // kg/m^3
    Vec3 wind = Vec3::Zero();    // m/s, world frame
    BodyMode body_mode = BodyMode::prescribed;
    double body_mass = 0.04;  // kg, point_mass mode

    int dt_per_cycle = 200;
    int n_cycles = 2;
    int n_warmup = 1;
    int n_keep_cycles = 3;
    double core_radius = 0.0075;  // m
    DownwashMode downwash_mode = DownwashMode::prandtl;
    WakeMode wake_mode = WakeMode::prescribed;

    GridSpec grid;
    OptimizerSpec optimizer;
    std::string output_dir = "wakegait_out";

    double dt() const { return gait.period() / dt_per_cycle; }

    /// Throws ConfigError naming the field.
    void validate() const;
};

/// Parses and validates; ConfigError carries the field name or line/column.
SimConfig config_from_json(const nlohmann::ordered_json& j);
SimConfig parse_config(const std::string& text);
SimConfig load_config(const std::filesystem::path& path);

/// Fully populated JSON (defaults echoed), stable key order.
nlohmann::ordered_json config_to_json(const SimConfig& cfg);
std::string dump_config(const SimConfig& cfg);
void save_config(const SimConfig& cfg, const std::filesystem::path& path);

}  // namespace wakegait
