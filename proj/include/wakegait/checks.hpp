#pragma once

// Built-in oracle suite. Each case compares the solver against an
// independent reference (closed form, quadrature or a brute-force solve)
// and reports the measured value next to its limit.

#include <string>
#include <vector>

namespace wakegait {

struct CheckResult {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool passed = false;
    std::string detail;
};

/// Single 2-D strip (c = 0.15 m, U = 1 m/s) under a unit step in wash:
/// beta(0+) and beta(t) against a trapezoid Duhamel quadrature over 100 semichords.
std::vector<CheckResult> wagner_step_checks();

/// Rectangular 0.34 m x 0.15 m wing at 5 deg incidence, 1 m/s, 16 elements per
/// side, marched for 50 chord-travel times and compared with a direct solve of
/// the monoplane equation.
std::vector<CheckResult> prandtl_steady_checks();

/// Straight filament, 256-gon ring centre and far-field decay of a lattice ring.
std::vector<CheckResult> biot_savart_checks();

/// RK4 error ratio under dt halving on a smoothly forced trajectory.
std::vector<CheckResult> rk4_order_checks();

/// Cases run by the `check` command: Biot-Savart, Wagner step, Prandtl.
std::vector<CheckResult> oracle_suite();

std::string format_check(const CheckResult& r);

}  // namespace wakegait
