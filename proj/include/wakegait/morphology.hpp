#pragma once

// Morphing two-segment wing: planform, blade-element discretization, gait
// output functions and the reduced body state.
//
// Frames: x forward (flight direction), y to the right wing tip, z up.
// Each wing is a rigid chain. The proximal segment flaps about the body
// x-axis at the root; the distal segment folds about a streamwise hinge at
// |s| = semispan_proximal and carries an extra nose-up pitch slaved to the
// fold angle. Positive flap raises the tip, positive fold lowers the distal
// segment relative to the proximal one.

#include "wakegait/math.hpp"

#include <string>
#include <vector>

namespace wakegait {

struct WingGeometry {
    double semispan_proximal = 0.08;  // m
    double semispan_distal = 0.09;    // m
    double chord_proximal = 0.15;     // m, at the root
    double chord_distal = 0.15;       // m, at the tip
    double sweep_distal = 0.0;        // rad, positive = tip aft
    int n_elements_per_side = 16;

    double semispan() const { return semispan_proximal + semispan_distal; }
    double mean_chord() const { return 0.5 * (chord_proximal + chord_distal); }

    /// Throws RejectedConfiguration naming the first violated field.
    void validate() const;
};

enum class Segment { proximal, distal };

struct BladeElement {
    int index = 0;
    double s = 0.0;      // signed spanwise station, m
    double theta = 0.0;  // arccos(s / l)
    double chord = 0.0;
    double width = 0.0;  // spanwise extent ds_i
    double sweep_offset = 0.0;  // streamwise aft shift of the quarter chord, m
    Segment segment = Segment::proximal;
    Vec3 quarter_chord_ref = Vec3::Zero();  // wing frame, zero joint angles
};

/// Discretized wing. Elements are ordered left tip to right tip (s increasing,
/// theta decreasing); `node_s` holds the n+1 element boundaries.
struct Wing {
    WingGeometry geometry;
    std::vector<BladeElement> elements;
    std::vector<double> node_s;

    std::size_t size() const { return elements.size(); }
    double semispan() const { return geometry.semispan(); }
};

/// Cosine-clustered stations: theta nodes at j*pi/N, element midpoints at
/// (j + 1/2)*pi/N, N = 2*n_elements_per_side. The left half mirrors the right.
Wing build_wing(const WingGeometry& geom);

double chord_at(const WingGeometry& geom, double s);
double sweep_offset_at(const WingGeometry& geom, double s);

enum class GaitMode { one_axis, three_axes };

std::string to_string(GaitMode mode);
GaitMode gait_mode_from_string(const std::string& name);

struct GaitParams {
    GaitMode mode = GaitMode::one_axis;
    double frequency = 2.0;        // Hz
    double flap_amplitude = 0.6;   // rad
    double flap_offset = 0.0;      // rad
    double incidence = 0.0;        // rad, constant whole-wing geometric pitch
    double fold_amplitude = 0.0;   // rad, three-axes only
    double fold_phase = pi / 2;    // rad, three-axes only
    double pitch_gain = 0.0;       // distal pitch per rad of fold, three-axes only

    double period() const { return 1.0 / frequency; }
    void validate() const;
};

/// Joint angles and rates, shared by both wings (symmetric drive).
/// `incidence` is the constant geometric pitch of the whole wing.
struct ShapeState {
    double incidence = 0.0;
    double flap = 0.0;
    double fold = 0.0;
    double pitch = 0.0;
    double flap_rate = 0.0;
    double fold_rate = 0.0;
    double pitch_rate = 0.0;

    bool operator==(const ShapeState&) const = default;
};

ShapeState eval_gait(const GaitParams& gait, double t);

/// Flap rate > 0 (wing moving up) marks the upstroke.
bool is_upstroke(const GaitParams& gait, double t);

struct BodyState {
    Vec3 position = Vec3::Zero();
    Vec3 euler = Vec3::Zero();  // roll, pitch, yaw (ZYX), rad
    Vec3 velocity = Vec3::Zero();
    Vec3 omega = Vec3::Zero();  // world-frame angular rate, rad/s
};

enum class BodyMode { prescribed, point_mass };

std::string to_string(BodyMode mode);
BodyMode body_mode_from_string(const std::string& name);

inline const Vec3 gravity{0.0, 0.0, -9.81};

BodyState step_body(const BodyState& body, const Vec3& total_force, double mass, double dt,
                    BodyMode mode);

/// A point rigidly attached to the wing, in world coordinates.
struct WingPoint {
    Vec3 position;
    Vec3 velocity;
};

/// Position and exact rigid-body velocity of the wing-surface point at signed
/// station s and chord fraction f (0 = leading edge, 1 = trailing edge).
WingPoint wing_point(const WingGeometry& geom, double s, double chord_fraction,
                     const ShapeState& shape, const BodyState& body);

struct ElementKinematics {
    std::vector<Vec3> quarter_chord;        // p_i
    std::vector<Vec3> collocation;          // three-quarter chord point
    std::vector<Vec3> normal;               // n_i, unit chord normal
    std::vector<Vec3> tangent;              // t_i, unit spanwise, towards +s
    std::vector<Vec3> velocity;             // at the collocation point
    std::vector<Vec3> quarter_chord_nodes;  // n+1 boundary nodes
    std::vector<Vec3> trailing_edge_nodes;  // n+1 boundary nodes

    std::size_t size() const { return quarter_chord.size(); }
};

ElementKinematics element_kinematics(const Wing& wing, const ShapeState& shape,
                                     const BodyState& body);

inline constexpr double min_relative_speed = 0.05;  // m/s

struct MotionWash {
    VecX y1;               // normal wash v_rel . n, m/s
    VecX speed;            // section-plane relative speed U_i, m/s
    std::vector<Vec3> relative_velocity;
    std::vector<int> stalled;  // element indices with U_i < min_relative_speed
};

MotionWash motion_wash(const ElementKinematics& kin, const Vec3& freestream);

}  // namespace wakegait
