#pragma once

#include <Eigen/Dense>

namespace vegnav::geom {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

// Axis-aligned rectangle in the horizontal x-y plane.
struct Rect2 {
    Vec2 min{0.0, 0.0};
    Vec2 max{0.0, 0.0};

    bool contains(const Vec2& p) const {
        return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() && p.y() <= max.y();
    }
    bool contains(const Rect2& r) const { return contains(r.min) && contains(r.max); }
    double width() const { return max.x() - min.x(); }
    double height() const { return max.y() - min.y(); }
};

// Local support-terrain approximation at a 2D query: plane center plus
// attitude, with per-channel variances. Used for the surface, proprioceptive,
// exteroceptive, and fused plane estimates alike.
struct PlaneEstimate {
    double x = 0.0;          // m
    double y = 0.0;          // m
    double z = 0.0;          // m
    double roll = 0.0;       // rad, in (-pi/2, pi/2)
    double pitch = 0.0;      // rad, in (-pi/2, pi/2)
    double var_z = 0.0;      // m^2
    double var_roll = 0.0;   // rad^2
    double var_pitch = 0.0;  // rad^2

    Vec2 xy() const { return {x, y}; }
};

inline double dist2d(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

}  // namespace vegnav::geom
