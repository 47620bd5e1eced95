#include "wakegait/morphology.hpp"

#include "wakegait/error.hpp"

#include <algorithm>
#include <cmath>

namespace wakegait {

void WingGeometry::validate() const {
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok) throw RejectedConfiguration(std::string(field) + ": " + what);
    };
    require(std::isfinite(semispan_proximal) && semispan_proximal > 0, "semispan_proximal",
            "must be > 0");
    require(std::isfinite(semispan_distal) && semispan_distal > 0, "semispan_distal",
            "must be > 0");
    require(std::isfinite(chord_proximal) && chord_proximal > 0, "chord_proximal", "must be > 0");
    require(std::isfinite(chord_distal) && chord_distal > 0, "chord_distal", "must be > 0");
    require(std::isfinite(sweep_distal) && std::abs(sweep_distal) < pi / 2, "sweep_distal",
            "|sweep| must be < pi/2");
    require(n_elements_per_side >= 2, "n_elements_per_side", "must be >= 2");
}

double chord_at(const WingGeometry& geom, double s) {
    const double r = std::abs(s) / geom.semispan();
    return geom.chord_proximal + (geom.chord_distal - geom.chord_proximal) * r;
}

double sweep_offset_at(const WingGeometry& geom, double s) {
    const double r = std::abs(s) - geom.semispan_proximal;
    return r > 0 ? r * std::tan(geom.sweep_distal) : 0.0;
}

namespace {

Segment segment_at(const WingGeometry& geom, double s) {
    return std::abs(s) <= geom.semispan_proximal ? Segment::proximal : Segment::distal;
}

// Wing-frame point at zero joint angles, right wing (sigma = |s|).
Vec3 reference_point(const WingGeometry& geom, double sigma, double chord_fraction) {
    const double c = chord_at(geom, sigma);
    return {-sweep_offset_at(geom, sigma) + (0.25 - chord_fraction) * c, sigma, 0.0};
}

struct SegmentFrame {
    Mat3 rotation;       // wing frame -> body frame
    Mat3 rotation_rate;  // d/dt of rotation
};

SegmentFrame segment_frame(Segment seg, const ShapeState& q) {
    const double incidence = q.incidence;
    const Mat3 flap = rot_x(q.flap);
    const Mat3 dflap = drot_x(q.flap) * q.flap_rate;
    if (seg == Segment::proximal) {
        const Mat3 inc = rot_y(-incidence);
        return {flap * inc, dflap * inc};
    }
    const Mat3 fold = rot_x(-q.fold);
    const Mat3 dfold = drot_x(-q.fold) * (-q.fold_rate);
    const Mat3 pitch = rot_y(-(incidence + q.pitch));
    const Mat3 dpitch = drot_y(-(incidence + q.pitch)) * (-q.pitch_rate);
    const Mat3 local = fold * pitch;
    const Mat3 dlocal = dfold * pitch + fold * dpitch;
    return {flap * local, dflap * local + flap * dlocal};
}

// Body-frame position/velocity of a right-wing point plus its segment frame.
struct BodyFramePoint {
    Vec3 position;
    Vec3 velocity;
    Mat3 rotation;
};

BodyFramePoint right_wing_point(const WingGeometry& geom, double sigma, double chord_fraction,
                                const ShapeState& q) {
    const Segment seg = segment_at(geom, sigma);
    const SegmentFrame frame = segment_frame(seg, q);
    const Vec3 ref = reference_point(geom, sigma, chord_fraction);
    // Both hinges pass through the y axis: root at the origin, fold/pitch hinge
    // at (0, semispan_proximal, 0).
    const Vec3 hinge = seg == Segment::proximal ? Vec3::Zero()
                                                : Vec3(0.0, geom.semispan_proximal, 0.0);
    const Mat3 flap = rot_x(q.flap);
    const Mat3 dflap = drot_x(q.flap) * q.flap_rate;
    const Vec3 arm = ref - hinge;
    const Vec3 pos = flap * hinge + frame.rotation * arm;
    const Vec3 vel = dflap * hinge + frame.rotation_rate * arm;
    return {pos, vel, frame.rotation};
}

Mat3 body_attitude(const BodyState& body) {
    return rot_z(body.euler.z()) * rot_y(body.euler.y()) * rot_x(body.euler.x());
}

WingPoint to_world(const BodyState& body, const Mat3& attitude, const Vec3& p, const Vec3& v) {
    const Vec3 r = attitude * p;
    return {body.position + r, body.velocity + body.omega.cross(r) + attitude * v};
}

}  // namespace

Wing build_wing(const WingGeometry& geom) {
    geom.validate();
    const int half = geom.n_elements_per_side;
    const int total = 2 * half;
    const double l = geom.semispan();

    Wing wing;
    wing.geometry = geom;

    // Right half first, theta in (0, pi/2); node theta j*pi/N for j = 0..half.
    std::vector<double> right_nodes(half + 1);
    for (int j = 0; j <= half; ++j) {
        right_nodes[j] = j == half ? 0.0 : l * std::cos(j * pi / total);
    }
    std::vector<double> right_theta(half), right_s(half);
    for (int j = 0; j < half; ++j) {
        right_theta[j] = (j + 0.5) * pi / total;
        right_s[j] = l * std::cos(right_theta[j]);
    }

    wing.node_s.resize(total + 1);
    for (int j = 0; j <= half; ++j) {
        wing.node_s[j] = -right_nodes[j];
        wing.node_s[total - j] = right_nodes[j];
    }

    wing.elements.resize(total);
    for (int j = 0; j < half; ++j) {
        // left element index j mirrors right element index total-1-j
        const int li = j;
        const int ri = total - 1 - j;
        for (int side = 0; side < 2; ++side) {
            const int i = side == 0 ? li : ri;
            BladeElement& e = wing.elements[i];
            e.index = i;
            e.s = side == 0 ? -right_s[j] : right_s[j];
            e.theta = side == 0 ? pi - right_theta[j] : right_theta[j];
            e.chord = chord_at(geom, e.s);
            e.sweep_offset = sweep_offset_at(geom, e.s);
            e.segment = segment_at(geom, e.s);
            e.width = wing.node_s[i + 1] - wing.node_s[i];
            const Vec3 ref = reference_point(geom, std::abs(e.s), 0.25);
            e.quarter_chord_ref = side == 0 ? mirror_y(ref) : ref;
        }
    }

    for (int i = 1; i < total; ++i) {
        if (!(wing.elements[i].theta < wing.elements[i - 1].theta)) {
            throw RejectedConfiguration("build_wing: blade-element angles are not distinct");
        }
    }
    return wing;
}

std::string to_string(GaitMode mode) {
    return mode == GaitMode::one_axis ? "one_axis" : "three_axes";
}

GaitMode gait_mode_from_string(const std::string& name) {
    if (name == "one_axis") return GaitMode::one_axis;
    if (name == "three_axes") return GaitMode::three_axes;
    throw ConfigError("mode", "expected one_axis or three_axes, got '" + name + "'");
}

void GaitParams::validate() const {
    auto require = [](bool ok, const char* field, const char* what) {
        if (!ok) throw RejectedConfiguration(std::string(field) + ": " + what);
    };
    require(std::isfinite(frequency) && frequency > 0, "frequency", "must be > 0");
    require(std::isfinite(flap_amplitude) && flap_amplitude >= 0, "flap_amplitude",
            "must be >= 0");
    require(std::isfinite(fold_amplitude) && fold_amplitude >= 0, "fold_amplitude",
            "must be >= 0");
    require(std::isfinite(flap_offset), "flap_offset", "must be finite");
    require(std::isfinite(incidence), "incidence", "must be finite");
    require(std::isfinite(fold_phase), "fold_phase", "must be finite");
    require(std::isfinite(pitch_gain), "pitch_gain", "must be finite");
}

ShapeState eval_gait(const GaitParams& gait, double t) {
    const double w = 2.0 * pi * gait.frequency;
    ShapeState q;
    q.incidence = gait.incidence;
    q.flap = gait.flap_offset + gait.flap_amplitude * std::sin(w * t);
    q.flap_rate = gait.flap_amplitude * w * std::cos(w * t);
    if (gait.mode == GaitMode::three_axes) {
        // Half-rectified: the distal segment folds only while sin(.) > 0.
        const double phase = w * t + gait.fold_phase;
        const double sn = std::sin(phase);
        if (sn > 0) {
            q.fold = gait.fold_amplitude * sn;
            q.fold_rate = gait.fold_amplitude * w * std::cos(phase);
        }
        q.pitch = gait.pitch_gain * q.fold;
        q.pitch_rate = gait.pitch_gain * q.fold_rate;
    }
    return q;
}

bool is_upstroke(const GaitParams& gait, double t) {
    return std::cos(2.0 * pi * gait.frequency * t) * gait.flap_amplitude > 0;
}

std::string to_string(BodyMode mode) {
    return mode == BodyMode::prescribed ? "prescribed" : "point_mass";
}

BodyMode body_mode_from_string(const std::string& name) {
    if (name == "prescribed") return BodyMode::prescribed;
    if (name == "point_mass") return BodyMode::point_mass;
    throw ConfigError("body_mode", "expected prescribed or point_mass, got '" + name + "'");
}

BodyState step_body(const BodyState& body, const Vec3& total_force, double mass, double dt,
                    BodyMode mode) {
    BodyState next = body;
    if (mode == BodyMode::point_mass) {
        next.velocity = body.velocity + (total_force / mass + gravity) * dt;
    }
    next.position = body.position + next.velocity * dt;
    return next;
}

WingPoint wing_point(const WingGeometry& geom, double s, double chord_fraction,
                     const ShapeState& shape, const BodyState& body) {
    BodyFramePoint p = right_wing_point(geom, std::abs(s), chord_fraction, shape);
    const Mat3 att = body_attitude(body);
    if (s == 0.0) {
        // the two root sections rotate apart when flapping off the x-axis;
        // the shared root node sits midway, on the symmetry plane
        p.position.y() = 0.0;
        p.velocity.y() = 0.0;
    }
    if (s < 0) return to_world(body, att, mirror_y(p.position), mirror_y(p.velocity));
    return to_world(body, att, p.position, p.velocity);
}

ElementKinematics element_kinematics(const Wing& wing, const ShapeState& shape,
                                     const BodyState& body) {
    const WingGeometry& g = wing.geometry;
    const std::size_t n = wing.size();
    const Mat3 att = body_attitude(body);
    ElementKinematics k;
    k.quarter_chord.resize(n);
    k.collocation.resize(n);
    k.normal.resize(n);
    k.tangent.resize(n);
    k.velocity.resize(n);
    k.quarter_chord_nodes.resize(n + 1);
    k.trailing_edge_nodes.resize(n + 1);

    for (std::size_t i = 0; i < n; ++i) {
        const BladeElement& e = wing.elements[i];
        const double sigma = std::abs(e.s);
        const BodyFramePoint qc = right_wing_point(g, sigma, 0.25, shape);
        const BodyFramePoint cp = right_wing_point(g, sigma, 0.75, shape);
        Vec3 normal = cp.rotation * Vec3::UnitZ();
        Vec3 tangent = cp.rotation * Vec3::UnitY();
        Vec3 qc_pos = qc.position, cp_pos = cp.position, cp_vel = cp.velocity;
        if (e.s < 0) {
            qc_pos = mirror_y(qc_pos);
            cp_pos = mirror_y(cp_pos);
            cp_vel = mirror_y(cp_vel);
            normal = mirror_y(normal);
            tangent = -mirror_y(tangent);
        }
        k.quarter_chord[i] = to_world(body, att, qc_pos, Vec3::Zero()).position;
        const WingPoint c = to_world(body, att, cp_pos, cp_vel);
        k.collocation[i] = c.position;
        k.velocity[i] = c.velocity;
        k.normal[i] = att * normal;
        k.tangent[i] = att * tangent;
    }
    for (std::size_t j = 0; j <= n; ++j) {
        const double s = wing.node_s[j];
        k.quarter_chord_nodes[j] = wing_point(g, s, 0.25, shape, body).position;
        k.trailing_edge_nodes[j] = wing_point(g, s, 1.0, shape, body).position;
    }
    return k;
}

MotionWash motion_wash(const ElementKinematics& kin, const Vec3& freestream) {
    const std::size_t n = kin.size();
    MotionWash w;
    w.y1.resize(static_cast<Eigen::Index>(n));
    w.speed.resize(static_cast<Eigen::Index>(n));
    w.relative_velocity.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 rel = freestream - kin.velocity[i];
        const auto ii = static_cast<Eigen::Index>(i);
        w.relative_velocity[i] = rel;
        w.y1[ii] = rel.dot(kin.normal[i]);
        // section plane: everything but the spanwise component
        w.speed[ii] = (rel - rel.dot(kin.tangent[i]) * kin.tangent[i]).norm();
        if (w.speed[ii] < min_relative_speed) w.stalled.push_back(static_cast<int>(i));
    }
    return w;
}

}  // namespace wakegait
