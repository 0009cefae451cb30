#pragma once

#include <cstdint>
#include <optional>

#include "vegnav/geom/core.hpp"
#include "vegnav/geom/point_cloud_index.hpp"

namespace vegnav::support {

using geom::PlaneEstimate;
using geom::Vec2;
using geom::Vec3;

struct SurfFitConfig {
    double radius = 0.15;           // m, cylindrical envelope around the query
    int ransac_iters = 100;
    double inlier_threshold = 0.03; // m, point-to-plane distance
    int min_points = 8;             // fewer enveloped points -> fit refused
    double kappa_r = 1.0;           // attitude-variance coefficients
    double kappa_p = 1.0;
    std::uint64_t seed = 0;         // RANSAC sampling seed

    bool valid() const {
        return radius > 0.0 && ransac_iters >= 1 && inlier_threshold > 0.0 && min_points >= 3 &&
               kappa_r > 0.0 && kappa_p > 0.0;
    }
};

// RANSAC plane fit over the points within `radius` of q, refined by a total
// least-squares fit on the consensus set. Returns nullopt when fewer than
// min_points are enveloped or no acceptable plane exists (the caller treats
// the node as unknowable).
//
// Center is (q.x, q.y, plane height at q). Attitude comes from the plane
// normal. Attitude variances average the squared normal distances of the
// inliers (scaled by kappa_r / kappa_p); the height variance averages the
// squared offsets between every enveloped point's height and the center
// height.
std::optional<PlaneEstimate> fit_surf_plane(const geom::PointCloudIndex& cloud, const Vec2& q,
                                            const SurfFitConfig& cfg);

// Non-robust total-least-squares fit over all enveloped points; same center
// and variance conventions. The reference RANSAC is measured against.
std::optional<PlaneEstimate> fit_plane_lsq(const geom::PointCloudIndex& cloud, const Vec2& q,
                                           const SurfFitConfig& cfg);

}  // namespace vegnav::support
