#pragma once

// Wake-structure gait design: find the morphology/gait parameters whose wake
// mesh matches a desired one in the least-squares sense over index-aligned
// vertices.

#include "wakegait/config.hpp"
#include "wakegait/simulation.hpp"
#include "wakegait/wake.hpp"

#include <functional>
#include <string>
#include <vector>

namespace wakegait {

/// Sum of squared distances between index-aligned vertices, m^2.
/// Throws MeshMismatch when the vertex counts differ.
double wake_distance(const WakeStructure& w, const WakeStructure& wd);
double wake_distance(std::span<const Vec3> w, std::span<const Vec3> wd);

/// Design fields that may be optimized. Span fields are not designable.
enum class DesignField { chord_proximal, chord_distal, sweep_distal, flap_amplitude,
                         fold_amplitude, fold_phase, pitch_gain, incidence };

DesignField design_field_from_string(const std::string& name);
std::string to_string(DesignField field);

struct DesignSpace {
    std::vector<DesignField> fields;
    std::vector<double> lower;
    std::vector<double> upper;

    static DesignSpace from_config(const OptimizerSpec& spec);
    std::size_t dim() const { return fields.size(); }
    bool contains(std::span<const double> x) const;
    std::vector<double> clamp(std::span<const double> x) const;
    std::vector<double> normalize(std::span<const double> x) const;
    std::vector<double> denormalize(std::span<const double> u) const;

    /// Reads the design fields out of a candidate.
    std::vector<double> values(const Candidate& c) const;
    /// Candidate with the design fields overwritten.
    Candidate apply(const Candidate& base, std::span<const double> x) const;
};

inline constexpr double out_of_bounds_cost = 1e9;   // m^2, offset for clamped candidates
inline constexpr double infeasible_cost = 2e9;      // m^2, failed simulations
inline constexpr double bound_penalty_weight = 1e3;

/// Wake distance of the candidate's final-cycle mesh to `desired`.
/// Out-of-bounds x is clamped and charged out_of_bounds_cost + 1e3 d^2 on top
/// (d measured in bound-normalized units); infeasible runs cost infeasible_cost.
double evaluate_candidate(std::span<const double> x, const DesignSpace& space,
                          const Candidate& base, const SimConfig& config,
                          const WakeStructure& desired);

enum class Termination { budget, tolerance, simplex_collapse };
std::string to_string(Termination t);

struct Evaluation {
    std::vector<double> x;
    double cost;
};

struct OptResult {
    std::vector<double> best;
    double best_cost = 0.0;
    std::vector<Evaluation> history;
    int evaluations = 0;
    Termination terminated_by = Termination::budget;

    /// Running minimum of history costs.
    std::vector<double> best_so_far() const;
};

struct NelderMeadOptions {
    int budget = 200;
    double simplex_tolerance = 1e-6;  // normalized diameter
    double cost_tolerance = 1e-12;    // relative spread of simplex costs
    double initial_step = 0.05;       // normalized
};

using Objective = std::function<double(std::span<const double>)>;

/// Nelder-Mead in normalized coordinates u in [0,1]^d. The objective receives
/// physical coordinates (possibly outside the box) and handles bounds itself.
OptResult nelder_mead(const Objective& f, const DesignSpace& space, std::span<const double> x0,
                      const NelderMeadOptions& opts);

/// Gait-design problem: evaluate_candidate under Nelder-Mead.
OptResult optimize(const SimConfig& config, const WakeStructure& desired,
                   std::span<const double> x0, int budget);

}  // namespace wakegait
