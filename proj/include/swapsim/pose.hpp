#pragma once

/**
 * Planar pose and small 2D vector helpers used by the docking simulator.
 *
 * Frame convention ("port frame"): the docking approach axis is +x, pointing
 * from the port mouth into the hub; +y is lateral (to the rover's left when
 * approaching); yaw is the counter-clockwise angle, in degrees, between the
 * rover's forward axis and +x.  Yaw is kept normalised to (-180, 180].
 */

#include <cmath>

#include "swapsim/units.hpp"

namespace swapsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    /// z-component of the 3D cross product (this x o).
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
    Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
    /// 90-degree counter-clockwise rotation.
    Vec2 perp() const { return {-y, x}; }
};

inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }

/// Map an angle in degrees onto the canonical interval (-180, 180].
inline double normalize_yaw_deg(double deg) {
    double a = std::fmod(deg, 360.0);
    if (a <= -180.0) a += 360.0;
    if (a > 180.0) a -= 360.0;
    return a;
}

/**
 * Rover pose in the port frame.  x_axial/y_lateral locate the reference
 * point (centre of the rover's front face); yaw_deg is normalised to
 * (-180, 180].
 */
struct Pose2D {
    double x_axial = 0.0;   ///< m, along the approach axis
    double y_lateral = 0.0; ///< m, transverse offset
    double yaw_deg = 0.0;   ///< deg, CCW, normalised to (-180, 180]

    Pose2D() = default;
    Pose2D(double x, double y, double yaw)
        : x_axial(x), y_lateral(y), yaw_deg(normalize_yaw_deg(yaw)) {}

    /// Transform a point from the body frame to the port frame.
    Vec2 to_world(const Vec2& body) const {
        const double r = deg_to_rad(yaw_deg);
        const double c = std::cos(r), s = std::sin(r);
        return {x_axial + c * body.x - s * body.y,
                y_lateral + s * body.x + c * body.y};
    }

    /// Mirror across the approach axis (y -> -y, yaw -> -yaw).
    Pose2D mirrored() const { return Pose2D(x_axial, -y_lateral, -yaw_deg); }
};

}  // namespace swapsim
