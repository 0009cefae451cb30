#pragma once

#include <cstdint>
#include <vector>

#include "vegnav/geom/core.hpp"
#include "vegnav/geom/point_cloud_index.hpp"
#include "vegnav/geom/trajectory.hpp"

namespace vegnav::world {

using geom::Rect2;
using geom::Vec2;
using geom::Vec3;

// Gaussian bump amp * exp(-((x-cx)^2 + (y-cy)^2) / (2 sigma^2)).
struct Bump {
    double cx = 0.0;
    double cy = 0.0;
    double amp = 0.0;
    double sigma = 1.0;
};

// Sinusoidal modulation amp * sin(kx * x) * cos(ky * y).
struct Ripple {
    double amp = 0.0;
    double kx = 1.0;
    double ky = 1.0;
};

// Analytic smooth height field: base + linear ramp + bumps + ripples.
struct HeightField {
    double base = 0.0;
    double ramp_x = 0.0;  // dz/dx
    double ramp_y = 0.0;  // dz/dy
    std::vector<Bump> bumps;
    std::vector<Ripple> ripples;

    double value(double x, double y) const;
    Vec2 gradient(double x, double y) const;
};

struct Cylinder {
    Vec2 center{0.0, 0.0};
    double radius = 0.0;  // m
    double height = 0.0;  // m above the support surface
};

struct SensorNoise {
    double cloud_sigma = 0.0;    // m, per-point vertical noise
    double odom_pos_sigma = 0.0; // m, per-axis position noise
    double odom_att_sigma = 0.0; // rad, roll/pitch noise
    double density = 100.0;      // points / m^2

    bool valid() const {
        return cloud_sigma >= 0.0 && odom_pos_sigma >= 0.0 && odom_att_sigma >= 0.0 &&
               density >= 0.0;
    }
};

// Ground-truth world: rigid support surface g(x,y), non-negative vegetation
// height field h(x,y) seen only through the cloud's top surface, and rigid
// cylinder obstacles. Serves as the oracle for estimation accuracy.
class WorldModel {
public:
    WorldModel(Rect2 bounds, HeightField support, HeightField vegetation,
               std::vector<Cylinder> obstacles, SensorNoise noise);

    double support_z(double x, double y) const { return support_.value(x, y); }
    Vec2 support_gradient(double x, double y) const { return support_.gradient(x, y); }
    // Vegetation is clamped at zero; the parameterization should stay
    // non-negative on its own for the smoothness assumption to hold.
    double veg_height(double x, double y) const;
    const Cylinder* obstacle_at(double x, double y) const;

    const Rect2& bounds() const { return bounds_; }
    const std::vector<Cylinder>& obstacles() const { return obstacles_; }
    const SensorNoise& noise() const { return noise_; }

    // True support plane at (x,y): z from g, attitude from the analytic
    // gradient (yaw-free convention), all variances zero.
    geom::PlaneEstimate ground_truth_plane(double x, double y) const;

    // Min 2D distance from p to any obstacle boundary (0 inside, +inf if no
    // obstacles).
    double obstacle_clearance(const Vec2& p) const;

private:
    Rect2 bounds_;
    HeightField support_;
    HeightField vegetation_;
    std::vector<Cylinder> obstacles_;
    SensorNoise noise_;
};

// Noisy canopy-top point cloud on a jittered grid of the given density.
// Points over obstacle footprints sit at g + obstacle height. Deterministic
// per seed.
std::vector<Vec3> sample_cloud(const WorldModel& world, const SensorNoise& noise,
                               const Rect2& region, std::uint64_t seed);

geom::PointCloudIndex sample_cloud_index(const WorldModel& world, const SensorNoise& noise,
                                         const Rect2& region, std::uint64_t seed,
                                         double cell_size = 0.15);

// Odometry simulation along a waypoint polyline, one pose every `stride`
// meters. Attitude is the ground-truth plane attitude plus noise, composed
// with the path heading as yaw; z is g plus noise. Deterministic per seed.
geom::TrajectoryHistory simulate_traverse(const WorldModel& world, const SensorNoise& noise,
                                          const std::vector<Vec2>& waypoints, double stride,
                                          std::uint64_t seed, std::size_t capacity = 50,
                                          double min_stride = 0.05, double sigma_n_pro = 1e-4);

}  // namespace vegnav::world
