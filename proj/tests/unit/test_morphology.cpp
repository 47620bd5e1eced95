#include "wakegait/error.hpp"
#include "wakegait/morphology.hpp"

#include <doctest.h>

#include <cmath>

using namespace wakegait;

namespace {

WingGeometry baseline_geometry() { return {}; }

GaitParams three_axes_gait() {
    GaitParams g;
    g.mode = GaitMode::three_axes;
    g.fold_amplitude = 1.0;
    g.fold_phase = pi / 2;
    g.pitch_gain = 0.25;
    g.incidence = 0.1;
    return g;
}

}  // namespace

TEST_CASE("stations: cosine clustering over the full span") {
    const Wing w = build_wing(baseline_geometry());
    REQUIRE(w.size() == 32);
    REQUIRE(w.node_s.size() == 33);
    double width = 0.0;
    for (const auto& e : w.elements) {
        width += e.width;
        CHECK(e.width > 0.0);
        CHECK(std::acos(e.s / w.semispan()) == doctest::Approx(e.theta).epsilon(1e-12));
    }
    CHECK(width == doctest::Approx(2.0 * 0.17).epsilon(1e-14));
    for (std::size_t i = 1; i < w.size(); ++i) CHECK(w.elements[i].theta < w.elements[i - 1].theta);
    CHECK(w.node_s.front() == doctest::Approx(-0.17));
    CHECK(w.node_s.back() == doctest::Approx(0.17));
    // station at the root maps to the mid angle
    CHECK(std::acos(0.0 / w.semispan()) == doctest::Approx(pi / 2));
}

TEST_CASE("stations: left half is the exact mirror of the right") {
    WingGeometry g;
    g.sweep_distal = 0.3;
    g.chord_distal = 0.1;
    const Wing w = build_wing(g);
    const std::size_t n = w.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        const auto& l = w.elements[i];
        const auto& r = w.elements[n - 1 - i];
        CHECK(l.s == -r.s);
        CHECK(l.chord == r.chord);
        CHECK(l.width == r.width);
        CHECK(l.theta == doctest::Approx(pi - r.theta).epsilon(1e-15));
        CHECK(l.quarter_chord_ref == mirror_y(r.quarter_chord_ref));
    }
}

TEST_CASE("planform: chord and sweep") {
    WingGeometry g;
    CHECK(sweep_offset_at(g, 0.15) == 0.0);
    CHECK(chord_at(g, 0.0) == doctest::Approx(0.15));
    g.chord_distal = 0.05;
    g.sweep_distal = 0.4;
    CHECK(chord_at(g, 0.17) == doctest::Approx(0.05));
    CHECK(chord_at(g, -0.17) == doctest::Approx(0.05));
    CHECK(sweep_offset_at(g, 0.05) == 0.0);
    CHECK(sweep_offset_at(g, 0.17) == doctest::Approx(0.09 * std::tan(0.4)));
    CHECK(sweep_offset_at(g, -0.17) == doctest::Approx(0.09 * std::tan(0.4)));
}

TEST_CASE("planform: zero sweep gives a straight quarter-chord line") {
    const Wing w = build_wing(baseline_geometry());
    for (const auto& e : w.elements) {
        CHECK(e.sweep_offset == 0.0);
        CHECK(e.quarter_chord_ref.x() == doctest::Approx(w.elements[0].quarter_chord_ref.x()));
    }
}

TEST_CASE("planform: invalid geometry is rejected with the field name") {
    WingGeometry g;
    g.chord_proximal = -0.1;
    try {
        build_wing(g);
        FAIL("negative chord accepted");
    } catch (const RejectedConfiguration& e) {
        CHECK(std::string(e.what()).find("chord_proximal") != std::string::npos);
    }
    g = {};
    g.n_elements_per_side = 0;
    CHECK_THROWS_AS(build_wing(g), RejectedConfiguration);
}

TEST_CASE("gait: one-axis waveform and rates") {
    GaitParams g;
    g.flap_offset = 0.1;
    const double t = 0.07;
    const ShapeState q = eval_gait(g, t);
    const double w = 2.0 * pi * g.frequency;
    CHECK(q.flap == doctest::Approx(0.1 + 0.6 * std::sin(w * t)));
    CHECK(q.flap_rate == doctest::Approx(0.6 * w * std::cos(w * t)));
    CHECK(q.fold == 0.0);
    CHECK(q.pitch == 0.0);
    CHECK(g.period() == 0.5);

    g.flap_amplitude = 0.0;
    const ShapeState still = eval_gait(g, 0.123);
    CHECK(still.flap == 0.1);
    CHECK(still.flap_rate == 0.0);
}

TEST_CASE("gait: one-axis ignores fold and pitch fields") {
    GaitParams a;
    GaitParams b = a;
    b.fold_amplitude = 0.9;
    b.pitch_gain = 3.0;
    for (double t = 0.0; t < 1.0; t += 0.013) CHECK(eval_gait(a, t) == eval_gait(b, t));
}

TEST_CASE("gait: three-axes with zero fold reduces to one-axis bitwise") {
    GaitParams one;
    GaitParams three = one;
    three.mode = GaitMode::three_axes;
    three.fold_amplitude = 0.0;
    three.pitch_gain = 0.7;
    for (double t = 0.0; t < 1.0; t += 0.0071) CHECK(eval_gait(one, t) == eval_gait(three, t));
}

TEST_CASE("gait: folding happens only during the upstroke") {
    const GaitParams g = three_axes_gait();
    double peak = 0.0;
    double t_peak = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const double t = k * g.period() / 2000;
        const ShapeState q = eval_gait(g, t);
        CHECK(q.fold >= 0.0);
        if (q.fold > 0.0) CHECK(is_upstroke(g, t));
        CHECK(q.pitch == doctest::Approx(g.pitch_gain * q.fold));
        if (q.fold > peak) {
            peak = q.fold;
            t_peak = t;
        }
    }
    CHECK(peak == doctest::Approx(g.fold_amplitude).epsilon(1e-6));
    CHECK(is_upstroke(g, t_peak));
}

TEST_CASE("gait: rates match finite differences") {
    const GaitParams g = three_axes_gait();
    const double h = 1e-6;
    for (double t : {0.01, 0.05, 0.12, 0.3, 0.44}) {
        const ShapeState q = eval_gait(g, t);
        const ShapeState p = eval_gait(g, t + h);
        const ShapeState m = eval_gait(g, t - h);
        CHECK(q.flap_rate == doctest::Approx((p.flap - m.flap) / (2 * h)).epsilon(1e-6));
        CHECK(q.fold_rate == doctest::Approx((p.fold - m.fold) / (2 * h)).epsilon(1e-6));
        CHECK(q.pitch_rate == doctest::Approx((p.pitch - m.pitch) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("kinematics: rest pose matches the reference geometry") {
    const Wing w = build_wing(baseline_geometry());
    GaitParams g;
    g.flap_amplitude = 0.0;
    const auto kin = element_kinematics(w, eval_gait(g, 0.0), BodyState{});
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK((kin.quarter_chord[i] - w.elements[i].quarter_chord_ref).norm() < 1e-15);
        CHECK(kin.velocity[i].norm() == 0.0);
        CHECK(kin.normal[i].z() == doctest::Approx(1.0));
    }
}

TEST_CASE("kinematics: frozen shape in forward flight moves with the body") {
    const Wing w = build_wing(baseline_geometry());
    GaitParams g;
    g.flap_amplitude = 0.0;
    g.incidence = 0.2;
    BodyState body;
    body.velocity = Vec3(1.0, 0.0, 0.0);
    const auto kin = element_kinematics(w, eval_gait(g, 0.0), body);
    for (const auto& v : kin.velocity) CHECK((v - Vec3(1.0, 0.0, 0.0)).norm() < 1e-15);
}

TEST_CASE("kinematics: pure flap speed is omega times distance to the hinge axis") {
    const Wing w = build_wing(baseline_geometry());
    GaitParams g;
    const ShapeState q = eval_gait(g, 0.0);  // flap = 0, peak rate
    const auto kin = element_kinematics(w, q, BodyState{});
    for (std::size_t i = 0; i < w.size(); ++i) {
        const Vec3 p = kin.collocation[i];
        const double r = std::hypot(p.y(), p.z());
        CHECK(kin.velocity[i].norm() == doctest::Approx(std::abs(q.flap_rate) * r).epsilon(1e-12));
    }
}

TEST_CASE("kinematics: velocities match finite differences of positions") {
    WingGeometry geom;
    geom.sweep_distal = 0.2;
    const Wing w = build_wing(geom);
    const GaitParams g = three_axes_gait();
    BodyState body;
    body.velocity = Vec3(1.0, 0.0, 0.0);
    const double h = 1e-6;
    for (double t : {0.02, 0.1, 0.2, 0.37}) {
        auto at = [&](double tt) {
            BodyState b = body;
            b.position = body.velocity * tt;
            return element_kinematics(w, eval_gait(g, tt), b);
        };
        const auto k0 = at(t);
        const auto kp = at(t + h);
        const auto km = at(t - h);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const Vec3 fd = (kp.collocation[i] - km.collocation[i]) / (2 * h);
            CHECK((fd - k0.velocity[i]).norm() < 1e-6 * (1.0 + k0.velocity[i].norm()));
        }
    }
}

TEST_CASE("kinematics: left and right wings are mirror images") {
    const Wing w = build_wing(baseline_geometry());
    const GaitParams g = three_axes_gait();
    BodyState body;
    body.velocity = Vec3(1.0, 0.0, 0.0);
    const auto kin = element_kinematics(w, eval_gait(g, 0.13), body);
    const std::size_t n = w.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = n - 1 - i;
        CHECK(kin.quarter_chord[i] == mirror_y(kin.quarter_chord[j]));
        CHECK(kin.velocity[i] == mirror_y(kin.velocity[j]));
        CHECK(kin.normal[i] == mirror_y(kin.normal[j]));
    }
    for (std::size_t i = 0; i <= n; ++i) {
        CHECK(kin.trailing_edge_nodes[i] == mirror_y(kin.trailing_edge_nodes[n - i]));
    }
}

TEST_CASE("kinematics: frames are orthonormal") {
    const Wing w = build_wing(baseline_geometry());
    const auto kin = element_kinematics(w, eval_gait(three_axes_gait(), 0.2), BodyState{});
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(kin.normal[i].norm() == doctest::Approx(1.0));
        CHECK(kin.tangent[i].norm() == doctest::Approx(1.0));
        CHECK(std::abs(kin.normal[i].dot(kin.tangent[i])) < 1e-14);
    }
}

TEST_CASE("motion wash: static wing at 5 degrees in a 1 m/s stream") {
    const Wing w = build_wing(baseline_geometry());
    GaitParams g;
    g.flap_amplitude = 0.0;
    g.incidence = 5.0 * pi / 180.0;
    BodyState body;
    body.velocity = Vec3(1.0, 0.0, 0.0);
    const auto wash = motion_wash(element_kinematics(w, eval_gait(g, 0.0), body), Vec3::Zero());
    for (int i = 0; i < wash.y1.size(); ++i) {
        CHECK(wash.y1[i] == doctest::Approx(std::sin(5.0 * pi / 180.0)).epsilon(1e-12));
        CHECK(wash.y1[i] == doctest::Approx(0.0872).epsilon(1e-3));
        CHECK(wash.speed[i] == doctest::Approx(1.0));
    }
    CHECK(wash.stalled.empty());

    g.incidence = 0.0;
    const auto level = motion_wash(element_kinematics(w, eval_gait(g, 0.0), body), Vec3::Zero());
    for (int i = 0; i < level.y1.size(); ++i) CHECK(std::abs(level.y1[i]) < 1e-15);
}

TEST_CASE("motion wash: upward wing motion reduces the wash") {
    const Wing w = build_wing(baseline_geometry());
    GaitParams g;  // flap rate positive at t = 0: upstroke
    BodyState body;
    body.velocity = Vec3(1.0, 0.0, 0.0);
    const auto wash = motion_wash(element_kinematics(w, eval_gait(g, 0.0), body), Vec3::Zero());
    for (int i = 0; i < wash.y1.size(); ++i) CHECK(wash.y1[i] < 0.0);
}

TEST_CASE("motion wash: hovering rest pose is flagged stalled") {
    const Wing w = build_wing(baseline_geometry());
    GaitParams g;
    g.flap_amplitude = 0.0;
    const auto wash = motion_wash(element_kinematics(w, eval_gait(g, 0.0), BodyState{}), Vec3::Zero());
    CHECK(wash.stalled.size() == w.size());
}

TEST_CASE("body: prescribed mode moves by the given velocity") {
    BodyState b;
    b.velocity = Vec3(1.0, 0.0, 0.0);
    const BodyState next = step_body(b, Vec3(0, 0, 100.0), 0.04, 0.0025, BodyMode::prescribed);
    CHECK((next.position - Vec3(0.0025, 0, 0)).norm() < 1e-15);
    CHECK(next.velocity == b.velocity);
}

TEST_CASE("body: point mass falls ballistically without lift") {
    BodyState b;
    const double dt = 1e-3;
    for (int k = 0; k < 1000; ++k) b = step_body(b, Vec3::Zero(), 0.04, dt, BodyMode::point_mass);
    CHECK(b.position.z() == doctest::Approx(-0.5 * 9.81).epsilon(2e-3));
    CHECK(b.velocity.z() == doctest::Approx(-9.81).epsilon(1e-12));
}

TEST_CASE("body: weight-balancing lift keeps the velocity constant") {
    BodyState b;
    b.velocity = Vec3(1.0, 0.0, 0.0);
    const double m = 0.04;
    for (int k = 0; k < 100; ++k) b = step_body(b, -m * gravity, m, 1e-3, BodyMode::point_mass);
    CHECK((b.velocity - Vec3(1.0, 0.0, 0.0)).norm() < 1e-14);
}
