#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "vegnav/geom/core.hpp"

namespace vegnav::geom {

// Spatial index over map points keyed on (x, y): a uniform 2D grid hash with
// cell size matched to the typical query radius. Radius queries are defined
// by brute-force equivalence; results are in deterministic (insertion) order.
class PointCloudIndex {
public:
    explicit PointCloudIndex(double cell_size = 0.15);
    PointCloudIndex(std::vector<Vec3> points, double cell_size = 0.15);

    void insert(const Vec3& p);

    // All points whose 2D distance to `center` is <= radius.
    std::vector<Vec3> radius_query(const Vec2& center, double radius) const;

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::vector<Vec3>& points() const { return points_; }

private:
    static std::uint64_t key(std::int32_t ix, std::int32_t iy);
    std::int32_t cell_of(double v) const;

    double cell_size_;
    std::vector<Vec3> points_;
    std::unordered_map<std::uint64_t, std::vector<std::int32_t>> buckets_;
};

}  // namespace vegnav::geom
