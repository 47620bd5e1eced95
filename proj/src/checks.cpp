#include "wakegait/checks.hpp"

#include "wakegait/aero.hpp"
#include "wakegait/morphology.hpp"
#include "wakegait/wake.hpp"

#include <Eigen/LU>

#include <cmath>
#include <memory>
#include <sstream>

namespace wakegait {

namespace {

CheckResult make(std::string name, double value, double limit, bool passed,
                 std::string detail = {}) {
    return {std::move(name), value, limit, passed, std::move(detail)};
}

// Wagner step ---------------------------------------------------------------

constexpr double strip_chord = 0.15;
constexpr double strip_speed = 1.0;

AeroSystem strip_system() {
    BladeElement e;
    e.theta = pi / 2;
    e.chord = strip_chord;
    e.width = 1.0;
    const std::vector<BladeElement> el{e};
    auto basis = std::make_shared<const FourierBasis>(el, 1.0, DownwashMode::none);
    return assemble_aero(basis, VecX::Constant(1, strip_speed));
}

// beta(t) = Phi0 w + int_0^t dPhi/dt(t - s) w ds, trapezoid on `points` nodes
double duhamel_step(double t, double w, int points) {
    const WagnerParams p;
    const double rate = 2.0 * strip_speed / strip_chord;
    auto dphi = [&](double u) {
        const double tau = rate * u;
        return rate * (p.psi1 * p.eps1 * std::exp(-p.eps1 * tau) +
                       p.psi2 * p.eps2 * std::exp(-p.eps2 * tau));
    };
    if (t <= 0.0) return p.phi0() * w;
    const double h = t / (points - 1);
    double sum = 0.5 * (dphi(t) + dphi(0.0));
    for (int j = 1; j < points - 1; ++j) sum += dphi(t - j * h);
    return p.phi0() * w + sum * h * w;
}

// Prandtl -------------------------------------------------------------------

struct PrandtlCase {
    Wing wing;
    VecX y1;
    VecX speed;
};

PrandtlCase prandtl_case() {
    WingGeometry g;
    g.semispan_proximal = 0.08;
    g.semispan_distal = 0.09;
    g.chord_proximal = 0.15;
    g.chord_distal = 0.15;
    g.n_elements_per_side = 16;
    GaitParams gait;
    gait.flap_amplitude = 0.0;
    gait.incidence = 5.0 * pi / 180.0;
    BodyState body;
    body.velocity = Vec3(1.0, 0.0, 0.0);
    PrandtlCase c;
    c.wing = build_wing(g);
    const auto kin = element_kinematics(c.wing, eval_gait(gait, 0.0), body);
    const auto wash = motion_wash(kin, Vec3::Zero());
    c.y1 = wash.y1;
    c.speed = wash.speed;
    return c;
}

// sum_k a_k sin(k th_i) (1 + pi c_i k / (4 l sin th_i)) = pi c_i y1_i
VecX monoplane_solve(const Wing& wing, const VecX& y1) {
    const int n = static_cast<int>(wing.size());
    const double l = wing.semispan();
    MatX m(n, n);
    VecX rhs(n);
    for (int i = 0; i < n; ++i) {
        const auto& e = wing.elements[static_cast<std::size_t>(i)];
        for (int k = 1; k <= n; ++k) {
            m(i, k - 1) = std::sin(k * e.theta) * (1.0 + pi * e.chord * k / (4.0 * l * std::sin(e.theta)));
        }
        rhs[i] = pi * e.chord * y1[i];
    }
    return m.fullPivLu().solve(rhs);
}

// Biot-Savart ---------------------------------------------------------------

std::vector<Filament> polygon_ring(int sides, double radius, double gamma) {
    std::vector<Filament> f;
    for (int j = 0; j < sides; ++j) {
        const double a0 = 2.0 * pi * j / sides;
        const double a1 = 2.0 * pi * (j + 1) / sides;
        f.push_back({Vec3(radius * std::cos(a0), radius * std::sin(a0), 0.0),
                     Vec3(radius * std::cos(a1), radius * std::sin(a1), 0.0), gamma});
    }
    return f;
}

}  // namespace

std::vector<CheckResult> wagner_step_checks() {
    const AeroSystem sys = strip_system();
    const VecX w = VecX::Ones(1);
    std::vector<CheckResult> out;

    const AeroState first = step_aero(sys, AeroState::zero(1), w, 1e-7);
    const double beta0 = aero_beta(sys, first, w)[0];
    const double jump = std::abs(beta0 - 0.5);
    std::ostringstream d;
    d << "beta(1e-7 s) = " << beta0;
    out.push_back(make("wagner.beta_0+", jump, 1e-6, jump <= 1e-6, d.str()));

    const double t_end = 100.0 * strip_chord / (2.0 * strip_speed);
    const int steps = 7500;
    const double dt = t_end / steps;
    AeroState state = AeroState::zero(1);
    double err = 0.0;
    for (int k = 1; k <= steps; ++k) {
        state = step_aero(sys, state, w, dt);
        if (k % 50 == 0) {
            const double beta = aero_beta(sys, state, w)[0];
            err = std::max(err, std::abs(beta - duhamel_step(k * dt, 1.0, 10000)));
        }
    }
    out.push_back(make("wagner.duhamel_max_abs", err, 1e-3, err <= 1e-3,
                       "tau in [0, 100] semichords"));
    return out;
}

std::vector<CheckResult> prandtl_steady_checks() {
    const PrandtlCase c = prandtl_case();
    const int n = static_cast<int>(c.wing.size());
    auto basis = std::make_shared<const FourierBasis>(c.wing.elements, c.wing.semispan(),
                                                      DownwashMode::prandtl);
    const AeroSystem sys = assemble_aero(basis, c.speed);

    const double t_end = 50.0 * 0.15 / 1.0;
    const int steps = 7500;
    const double dt = t_end / steps;
    AeroState state = AeroState::zero(n);
    double even = 0.0;
    for (int k = 0; k < steps; ++k) {
        state = step_aero(sys, state, c.y1, dt);
        const double norm = state.a.norm();
        for (int j = 1; j < n; j += 2) even = std::max(even, std::abs(state.a[j]) / norm);
    }
    const VecX ref = monoplane_solve(c.wing, c.y1);
    const double e1 = std::abs(state.a[0] - ref[0]) / std::abs(ref[0]);
    const double e3 = std::abs(state.a[2] - ref[2]) / std::abs(ref[2]);
    std::ostringstream d1, d3;
    d1 << "a1 = " << state.a[0] << ", reference " << ref[0];
    d3 << "a3 = " << state.a[2] << ", reference " << ref[2];
    return {make("prandtl.a1_rel", e1, 0.02, e1 <= 0.02, d1.str()),
            make("prandtl.a3_rel", e3, 0.05, e3 <= 0.05, d3.str()),
            make("prandtl.even_ratio", even, 1e-10, even <= 1e-10, "max |a_even| / |a| over the march")};
}

std::vector<CheckResult> biot_savart_checks() {
    std::vector<CheckResult> out;
    const double gamma = 1.0;

    {
        const double d = 0.01;
        const Filament f{Vec3(-100 * d, 0, 0), Vec3(100 * d, 0, 0), gamma};
        const double v = filament_velocity(f, Vec3(0, d, 0), 1e-6 * d).norm();
        const double rel = std::abs(v / (gamma / (2 * pi * d)) - 1.0);
        out.push_back(make("biot_savart.filament_rel", rel, 0.01, rel <= 0.01, "length 200 d"));
    }
    {
        const double r = 0.1;
        const auto ring = polygon_ring(256, r, gamma);
        const Vec3 centre = Vec3::Zero();
        const double v = induced_velocity(ring, std::span<const Vec3>(&centre, 1), 1e-6 * r)[0].z();
        const double rel = std::abs(v / (gamma / (2 * r)) - 1.0);
        out.push_back(make("biot_savart.ring_centre_rel", rel, 0.01, rel <= 0.01, "256-gon"));
    }
    {
        // one lattice ring, 0.1 m square, sampled far out along its axis
        const std::vector<Vec3> aft{Vec3(0, -0.05, 0), Vec3(0, 0.05, 0)};
        const std::vector<Vec3> fore{Vec3(0.1, -0.05, 0), Vec3(0.1, 0.05, 0)};
        WakeLattice lat = seed_lattice(aft, 0.0, 1e-4);
        const std::vector<double> g{gamma};
        shed(lat, fore, g, 1.0, 1);
        std::vector<Vec3> targets;
        std::vector<double> logd;
        for (int j = 0; j < 20; ++j) {
            const double dist = 1.0 * std::pow(10.0, j / 19.0);  // 10 to 100 ring widths
            targets.emplace_back(0.05, 0.0, dist);
            logd.push_back(std::log(dist));
        }
        const auto v = induced_velocity(lat, nullptr, targets);
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(targets.size());
        for (std::size_t j = 0; j < targets.size(); ++j) {
            const double y = std::log(v[j].norm());
            sx += logd[j];
            sy += y;
            sxx += logd[j] * logd[j];
            sxy += logd[j] * y;
        }
        const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        const double exponent = -slope;
        out.push_back(make("biot_savart.far_field_exponent", exponent, 0.1,
                           std::abs(exponent - 3.0) <= 0.1, "fit of |v| ~ d^-p, expect p = 3"));
    }
    return out;
}

std::vector<CheckResult> rk4_order_checks() {
    const PrandtlCase c = prandtl_case();
    const int n = static_cast<int>(c.wing.size());
    auto basis = std::make_shared<const FourierBasis>(c.wing.elements, c.wing.semispan(),
                                                      DownwashMode::prandtl);
    const AeroSystem sys = assemble_aero(basis, c.speed);
    const double omega = 2.0 * pi * 2.0;
    auto y1 = [&](double t) -> VecX { return c.y1 * (0.5 + std::sin(omega * t)); };
    const double t_end = 0.1;

    auto march = [&](int steps) {
        const double dt = t_end / steps;
        AeroState s = AeroState::zero(n);
        for (int k = 0; k < steps; ++k) {
            const double t = k * dt;
            s = step_aero(StageInputs{&sys, &sys, &sys, y1(t), y1(t + 0.5 * dt), y1(t + dt)}, s, dt);
        }
        return s.packed();
    };
    const int coarse = 800;
    const VecX ref = march(16 * coarse);
    const double e1 = (march(coarse) - ref).norm();
    const double e2 = (march(2 * coarse) - ref).norm();
    const double ratio = e1 / e2;
    std::ostringstream d;
    d << "e(dt) = " << e1 << ", e(dt/2) = " << e2 << ", dt = " << t_end / coarse << " s";
    return {make("rk4.halving_ratio", ratio, 4.0, std::abs(ratio - 16.0) <= 4.0, d.str())};
}

std::vector<CheckResult> oracle_suite() {
    std::vector<CheckResult> out = biot_savart_checks();
    for (auto& r : wagner_step_checks()) out.push_back(std::move(r));
    for (auto& r : prandtl_steady_checks()) out.push_back(std::move(r));
    return out;
}

std::string format_check(const CheckResult& r) {
    std::ostringstream s;
    s << (r.passed ? "PASS " : "FAIL ") << r.name << "  value=" << r.value << "  limit=" << r.limit;
    if (!r.detail.empty()) s << "  (" << r.detail << ")";
    return s.str();
}

}  // namespace wakegait
