#include "vegnav/world/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "vegnav/errors.hpp"
#include "vegnav/geom/attitude.hpp"
#include "vegnav/util/rng.hpp"

namespace vegnav::world {

double HeightField::value(double x, double y) const {
    double z = base + ramp_x * x + ramp_y * y;
    for (const auto& b : bumps) {
        const double dx = x - b.cx, dy = y - b.cy;
        z += b.amp * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
    }
    for (const auto& r : ripples) z += r.amp * std::sin(r.kx * x) * std::cos(r.ky * y);
    return z;
}

Vec2 HeightField::gradient(double x, double y) const {
    Vec2 g{ramp_x, ramp_y};
    for (const auto& b : bumps) {
        const double dx = x - b.cx, dy = y - b.cy;
        const double e = b.amp * std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
        g.x() += e * (-dx / (b.sigma * b.sigma));
        g.y() += e * (-dy / (b.sigma * b.sigma));
    }
    for (const auto& r : ripples) {
        g.x() += r.amp * r.kx * std::cos(r.kx * x) * std::cos(r.ky * y);
        g.y() += -r.amp * r.ky * std::sin(r.kx * x) * std::sin(r.ky * y);
    }
    return g;
}

WorldModel::WorldModel(Rect2 bounds, HeightField support, HeightField vegetation,
                       std::vector<Cylinder> obstacles, SensorNoise noise)
    : bounds_(bounds),
      support_(std::move(support)),
      vegetation_(std::move(vegetation)),
      obstacles_(std::move(obstacles)),
      noise_(noise) {
    if (bounds_.width() <= 0.0 || bounds_.height() <= 0.0)
        throw ConfigError("WorldModel: empty bounds");
    if (!noise_.valid()) throw ConfigError("WorldModel: negative noise parameter");
    for (const auto& c : obstacles_)
        if (c.radius <= 0.0 || c.height <= 0.0)
            throw ConfigError("WorldModel: obstacle radius/height must be > 0");
}

double WorldModel::veg_height(double x, double y) const {
    return std::max(0.0, vegetation_.value(x, y));
}

const Cylinder* WorldModel::obstacle_at(double x, double y) const {
    for (const auto& c : obstacles_)
        if ((Vec2(x, y) - c.center).norm() <= c.radius) return &c;
    return nullptr;
}

geom::PlaneEstimate WorldModel::ground_truth_plane(double x, double y) const {
    if (!bounds_.contains(Vec2(x, y)))
        throw OutOfBoundsError("ground_truth_plane: query outside world bounds");
    geom::PlaneEstimate p;
    p.x = x;
    p.y = y;
    p.z = support_z(x, y);
    const Vec2 g = support_gradient(x, y);
    geom::attitude_from_normal(Vec3(-g.x(), -g.y(), 1.0), p.roll, p.pitch);
    return p;
}

double WorldModel::obstacle_clearance(const Vec2& p) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : obstacles_)
        best = std::min(best, std::max(0.0, (p - c.center).norm() - c.radius));
    return best;
}

std::vector<Vec3> sample_cloud(const WorldModel& world, const SensorNoise& noise,
                               const Rect2& region, std::uint64_t seed) {
    if (!world.bounds().contains(region))
        throw OutOfBoundsError("sample_cloud: region outside world bounds");
    std::vector<Vec3> points;
    if (noise.density <= 0.0) return points;

    const double spacing = 1.0 / std::sqrt(noise.density);
    const auto nx = static_cast<std::int64_t>(std::floor(region.width() / spacing));
    const auto ny = static_cast<std::int64_t>(std::floor(region.height() / spacing));
    points.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, nx * ny)));

    auto rng = util::make_rng(seed, 0x0c1d);
    std::uniform_real_distribution<double> jitter(-0.5 * spacing, 0.5 * spacing);
    std::normal_distribution<double> gauss(0.0, 1.0);

    for (std::int64_t ix = 0; ix < nx; ++ix) {
        for (std::int64_t iy = 0; iy < ny; ++iy) {
            const double x0 = region.min.x() + (static_cast<double>(ix) + 0.5) * spacing;
            const double y0 = region.min.y() + (static_cast<double>(iy) + 0.5) * spacing;
            const double jx = jitter(rng), jy = jitter(rng), jz = gauss(rng);
            const double x = std::clamp(x0 + jx, region.min.x(), region.max.x());
            const double y = std::clamp(y0 + jy, region.min.y(), region.max.y());
            double z;
            if (const Cylinder* c = world.obstacle_at(x, y)) {
                z = world.support_z(x, y) + c->height + noise.cloud_sigma * jz;
            } else {
                z = world.support_z(x, y) + world.veg_height(x, y) + noise.cloud_sigma * jz;
            }
            points.emplace_back(x, y, z);
        }
    }
    return points;
}

geom::PointCloudIndex sample_cloud_index(const WorldModel& world, const SensorNoise& noise,
                                         const Rect2& region, std::uint64_t seed,
                                         double cell_size) {
    return geom::PointCloudIndex(sample_cloud(world, noise, region, seed), cell_size);
}

geom::TrajectoryHistory simulate_traverse(const WorldModel& world, const SensorNoise& noise,
                                          const std::vector<Vec2>& waypoints, double stride,
                                          std::uint64_t seed, std::size_t capacity,
                                          double min_stride, double sigma_n_pro) {
    if (stride <= 0.0) throw std::invalid_argument("simulate_traverse: stride must be > 0");
    if (waypoints.size() < 2)
        throw std::invalid_argument("simulate_traverse: need at least two waypoints");
    for (const auto& w : waypoints)
        if (!world.bounds().contains(w))
            throw OutOfBoundsError("simulate_traverse: waypoint outside world bounds");

    auto rng = util::make_rng(seed, 0x7a11);
    std::normal_distribution<double> gauss(0.0, 1.0);
    geom::TrajectoryHistory history(capacity, min_stride, sigma_n_pro);

    constexpr double kSpeed = 1.0;  // m/s, fixes the time stamps
    double carried = 0.0;           // distance into the current segment
    double travelled = 0.0;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        const Vec2 a = waypoints[i], b = waypoints[i + 1];
        const double seg = (b - a).norm();
        if (seg < 1e-12) continue;
        const Vec2 dir = (b - a) / seg;
        const double heading = std::atan2(dir.y(), dir.x());
        double s = carried;
        while (s <= seg) {
            const Vec2 p = a + s * dir;
            const auto truth = world.ground_truth_plane(p.x(), p.y());
            const double roll = truth.roll + noise.odom_att_sigma * gauss(rng);
            const double pitch = truth.pitch + noise.odom_att_sigma * gauss(rng);
            const Vec3 pos(p.x() + noise.odom_pos_sigma * gauss(rng),
                           p.y() + noise.odom_pos_sigma * gauss(rng),
                           truth.z + noise.odom_pos_sigma * gauss(rng));
            history.append(pos, geom::rotation_zyx(roll, pitch, heading),
                           (travelled + s) / kSpeed);
            s += stride;
        }
        carried = s - seg;
        travelled += seg;
    }
    return history;
}

}  // namespace vegnav::world
