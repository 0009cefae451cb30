#include "vegnav/geom/attitude.hpp"

#include <cmath>

#include "vegnav/errors.hpp"

namespace vegnav::geom {

bool is_rotation(const Mat3& R, double tol) {
    const Mat3 err = R.transpose() * R - Mat3::Identity();
    if (err.cwiseAbs().maxCoeff() > tol) return false;
    return std::abs(R.determinant() - 1.0) <= tol;
}

double extract_pitch(const Mat3& R) {
    return std::atan2(R(2, 0), std::sqrt(R(2, 1) * R(2, 1) + R(2, 2) * R(2, 2)));
}

double extract_roll(const Mat3& R) {
    const double p = extract_pitch(R);
    const double cp = std::cos(p);
    if (std::abs(cp) <= kGimbalLockCosTol)
        throw GimbalLockError("extract_roll: |cos(pitch)| <= 1e-8");
    return std::atan2(-R(2, 1) / cp, R(2, 2) / cp);
}

Mat3 rotation_zyx(double roll, double pitch, double yaw) {
    const double cr = std::cos(roll), sr = std::sin(roll);
    const double cp = std::cos(pitch), sp = std::sin(pitch);
    const double cy = std::cos(yaw), sy = std::sin(yaw);
    Mat3 rx, ry, rz;
    rx << 1, 0, 0,
          0, cr, sr,
          0, -sr, cr;
    ry << cp, 0, -sp,
          0, 1, 0,
          sp, 0, cp;
    rz << cy, sy, 0,
          -sy, cy, 0,
          0, 0, 1;
    return rz * ry * rx;
}

double slope_from_attitude(double roll, double pitch) {
    double c = std::cos(roll) * std::cos(pitch);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c);
}

void attitude_from_normal(const Vec3& normal, double& roll, double& pitch) {
    const Vec3 n = normal.normalized();
    roll = std::atan2(-n.y(), n.z());
    pitch = std::atan2(n.x(), std::sqrt(n.y() * n.y() + n.z() * n.z()));
}

}  // namespace vegnav::geom
