#include "vegnav/geom/point_cloud_index.hpp"

#include <cmath>
#include <stdexcept>

namespace vegnav::geom {

PointCloudIndex::PointCloudIndex(double cell_size) : cell_size_(cell_size) {
    if (cell_size_ <= 0.0) throw std::invalid_argument("PointCloudIndex: cell_size must be > 0");
}

PointCloudIndex::PointCloudIndex(std::vector<Vec3> points, double cell_size)
    : PointCloudIndex(cell_size) {
    points_.reserve(points.size());
    for (const auto& p : points) insert(p);
}

std::uint64_t PointCloudIndex::key(std::int32_t ix, std::int32_t iy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy));
}

std::int32_t PointCloudIndex::cell_of(double v) const {
    return static_cast<std::int32_t>(std::floor(v / cell_size_));
}

void PointCloudIndex::insert(const Vec3& p) {
    const auto id = static_cast<std::int32_t>(points_.size());
    points_.push_back(p);
    buckets_[key(cell_of(p.x()), cell_of(p.y()))].push_back(id);
}

std::vector<Vec3> PointCloudIndex::radius_query(const Vec2& center, double radius) const {
    std::vector<Vec3> out;
    if (radius <= 0.0 || points_.empty()) return out;
    const double r2 = radius * radius;
    const std::int32_t x0 = cell_of(center.x() - radius);
    const std::int32_t x1 = cell_of(center.x() + radius);
    const std::int32_t y0 = cell_of(center.y() - radius);
    const std::int32_t y1 = cell_of(center.y() + radius);
    for (std::int32_t ix = x0; ix <= x1; ++ix) {
        for (std::int32_t iy = y0; iy <= y1; ++iy) {
            const auto it = buckets_.find(key(ix, iy));
            if (it == buckets_.end()) continue;
            for (const std::int32_t id : it->second) {
                const Vec3& p = points_[static_cast<std::size_t>(id)];
                const double dx = p.x() - center.x();
                const double dy = p.y() - center.y();
                if (dx * dx + dy * dy <= r2) out.push_back(p);
            }
        }
    }
    return out;
}

}  // namespace vegnav::geom
