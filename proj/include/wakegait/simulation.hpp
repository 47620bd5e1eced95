#pragma once

// End-to-end Biot-Savart map: gait and morphology in, wake structure out.
//
// Per time step: gait -> element kinematics -> motion wash -> aero march
// (RK4, stage inputs at t, t+dt/2, t+dt) -> forces -> body update -> wake
// transport -> shed a ring row at the trailing edge with the new bound
// circulation.

#include "wakegait/aero.hpp"
#include "wakegait/config.hpp"
#include "wakegait/morphology.hpp"
#include "wakegait/wake.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wakegait {

/// Morphology and gait of one design candidate.
struct Candidate {
    WingGeometry wing;
    GaitParams gait;

    static Candidate from_config(const SimConfig& cfg) { return {cfg.wing, cfg.gait}; }
};

enum class Failure { none, rejected, numeric };

struct InvariantReport {
    bool kelvin = true;               // retained ring circulations equal their shed values
    double tip_gamma = 0.0;           // max |Gamma(0)|, |Gamma(pi)| over sum |a_k|
    double mirror_error = 0.0;        // max mirror mismatch of the final wake mesh, m
    double max_even_ratio = 0.0;      // max |a_even| / |a| over the run
    double condition_number = 0.0;    // cond(A)
    int stalled_samples = 0;          // element-stage samples below the speed floor
    int max_substeps = 1;             // largest aero substep count per wake step
};

struct SimulationResult {
    Failure failure = Failure::none;
    std::string reason;

    Wing wing;
    WakeLattice lattice;     // everything retained at the end of the run
    BoundVortex bound;       // wing rings at the final instant
    WakeStructure wake;      // final gait cycle
    int final_cycle_first_row = 0;  // index into lattice.ring_rows
    double warmup_end_time = 0.0;

    std::vector<double> times;
    std::vector<VecX> gamma_history;  // per time, per element
    std::vector<Vec3> force_history;  // total aerodynamic force
    BodyState body;
    InvariantReport invariants;

    bool feasible() const { return failure == Failure::none; }
};

SimulationResult biot_savart_map(const Candidate& candidate, const SimConfig& config);
inline SimulationResult biot_savart_map(const SimConfig& config) {
    return biot_savart_map(Candidate::from_config(config), config);
}

/// Vorticity grid of a finished run using the config's grid spec.
FieldGrid run_vorticity_field(const SimulationResult& result, const SimConfig& config);

/// omega_x integrals split by stroke and sign, 1/s * m^3.
struct StrokeVorticity {
    double upstroke_positive = 0.0;
    double upstroke_negative = 0.0;
    double downstroke_positive = 0.0;
    double downstroke_negative = 0.0;
};

/// Each interior grid point is attributed to the ring row whose mean x is
/// nearest; rows shed during warmup are skipped. A row belongs to the
/// upstroke when the flap rate at its shed time is positive.
StrokeVorticity stroke_vorticity(const FieldGrid& grid, const WakeLattice& lattice,
                                 const GaitParams& gait, double warmup_end_time);

/// Simulation, vorticity grid and stroke split for one config.
/// Throws RejectedConfiguration / NumericError when the run is infeasible.
StrokeVorticity run_stroke_vorticity(const SimConfig& config);

}  // namespace wakegait
