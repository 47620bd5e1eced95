#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>
#include <numbers>

namespace wakegait {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr double pi = std::numbers::pi;

inline Mat3 rot_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << 1, 0, 0, 0, c, -s, 0, s, c;
    return r;
}

inline Mat3 rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, 0, s, 0, 1, 0, -s, 0, c;
    return r;
}

inline Mat3 rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, -s, 0, s, c, 0, 0, 0, 1;
    return r;
}

// d/da of the elementary rotations.
inline Mat3 drot_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << 0, 0, 0, 0, -s, -c, 0, c, -s;
    return r;
}

inline Mat3 drot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << -s, 0, c, 0, 0, 0, -c, 0, -s;
    return r;
}

inline Vec3 mirror_y(const Vec3& v) { return {v.x(), -v.y(), v.z()}; }

}  // namespace wakegait
