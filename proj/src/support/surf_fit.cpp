#include "vegnav/support/surf_fit.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "vegnav/geom/attitude.hpp"

namespace vegnav::support {

namespace {

// Planes steeper than ~87 deg are rejected; attitude extraction needs an
// upward normal with a usable z component.
constexpr double kMinNormalZ = 0.05;

struct PlaneThroughPoint {
    Vec3 normal{0.0, 0.0, 1.0};  // unit, normal.z() > 0
    Vec3 point{0.0, 0.0, 0.0};

    double signed_dist(const Vec3& p) const { return normal.dot(p - point); }
};

// Total-least-squares plane: centroid plus smallest-eigenvalue direction of
// the scatter matrix.
std::optional<PlaneThroughPoint> tls_plane(const std::vector<Vec3>& pts,
                                           const std::vector<int>& idx) {
    if (idx.size() < 3) return std::nullopt;
    Vec3 centroid = Vec3::Zero();
    for (const int i : idx) centroid += pts[static_cast<std::size_t>(i)];
    centroid /= static_cast<double>(idx.size());
    Eigen::Matrix3d scatter = Eigen::Matrix3d::Zero();
    for (const int i : idx) {
        const Vec3 d = pts[static_cast<std::size_t>(i)] - centroid;
        scatter += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(scatter);
    if (eig.info() != Eigen::Success) return std::nullopt;
    Vec3 n = eig.eigenvectors().col(0);  // smallest eigenvalue
    if (n.norm() < 1e-12) return std::nullopt;
    n.normalize();
    if (n.z() < 0.0) n = -n;
    if (n.z() < kMinNormalZ) return std::nullopt;
    return PlaneThroughPoint{n, centroid};
}

std::optional<PlaneEstimate> finish_plane(const PlaneThroughPoint& plane,
                                          const std::vector<Vec3>& pts,
                                          const std::vector<int>& attitude_idx, const Vec2& q,
                                          const SurfFitConfig& cfg) {
    const Vec3& n = plane.normal;
    // Plane height at the query column.
    const double zq = plane.point.z() -
                      (n.x() * (q.x() - plane.point.x()) + n.y() * (q.y() - plane.point.y())) /
                          n.z();
    PlaneEstimate est;
    est.x = q.x();
    est.y = q.y();
    est.z = zq;
    geom::attitude_from_normal(n, est.roll, est.pitch);

    const Vec3 center(q.x(), q.y(), zq);
    double ss_normal = 0.0;
    for (const int i : attitude_idx) {
        const double d = n.dot(pts[static_cast<std::size_t>(i)] - center);
        ss_normal += d * d;
    }
    const double denom_att = static_cast<double>(attitude_idx.size()) - 1.0;
    est.var_roll = cfg.kappa_r * ss_normal / denom_att;
    est.var_pitch = cfg.kappa_p * ss_normal / denom_att;

    // Height variance over every enveloped point, against the center height.
    double ss_z = 0.0;
    for (const auto& p : pts) {
        const double d = p.z() - zq;
        ss_z += d * d;
    }
    est.var_z = ss_z / (static_cast<double>(pts.size()) - 1.0);
    return est;
}

}  // namespace

std::optional<PlaneEstimate> fit_surf_plane(const geom::PointCloudIndex& cloud, const Vec2& q,
                                            const SurfFitConfig& cfg) {
    if (!cfg.valid()) throw std::invalid_argument("fit_surf_plane: invalid config");
    const std::vector<Vec3> pts = cloud.radius_query(q, cfg.radius);
    const int n_pts = static_cast<int>(pts.size());
    if (n_pts < cfg.min_points) return std::nullopt;

    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> pick(0, n_pts - 1);

    std::vector<int> best_inliers;
    for (int it = 0; it < cfg.ransac_iters; ++it) {
        int a = pick(rng), b = pick(rng), c = pick(rng);
        if (a == b || a == c || b == c) continue;
        const Vec3& pa = pts[static_cast<std::size_t>(a)];
        Vec3 nrm = (pts[static_cast<std::size_t>(b)] - pa)
                       .cross(pts[static_cast<std::size_t>(c)] - pa);
        const double norm = nrm.norm();
        if (norm < 1e-12) continue;
        nrm /= norm;
        if (nrm.z() < 0.0) nrm = -nrm;
        if (nrm.z() < kMinNormalZ) continue;

        std::vector<int> inliers;
        inliers.reserve(pts.size());
        for (int i = 0; i < n_pts; ++i) {
            if (std::abs(nrm.dot(pts[static_cast<std::size_t>(i)] - pa)) <= cfg.inlier_threshold)
                inliers.push_back(i);
        }
        if (inliers.size() > best_inliers.size()) best_inliers = std::move(inliers);
    }
    if (best_inliers.size() < 3) return std::nullopt;

    const auto refit = tls_plane(pts, best_inliers);
    if (!refit) return std::nullopt;
    return finish_plane(*refit, pts, best_inliers, q, cfg);
}

std::optional<PlaneEstimate> fit_plane_lsq(const geom::PointCloudIndex& cloud, const Vec2& q,
                                           const SurfFitConfig& cfg) {
    if (!cfg.valid()) throw std::invalid_argument("fit_plane_lsq: invalid config");
    const std::vector<Vec3> pts = cloud.radius_query(q, cfg.radius);
    if (static_cast<int>(pts.size()) < cfg.min_points) return std::nullopt;
    std::vector<int> all(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) all[i] = static_cast<int>(i);
    const auto plane = tls_plane(pts, all);
    if (!plane) return std::nullopt;
    return finish_plane(*plane, pts, all, q, cfg);
}

}  // namespace vegnav::support
