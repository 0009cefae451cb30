#pragma once

#include "vegnav/geom/core.hpp"

namespace vegnav::geom {

// cos(pitch) below this magnitude counts as gimbal lock; such samples are
// rejected rather than clamped.
inline constexpr double kGimbalLockCosTol = 1e-8;

// Orthonormality / determinant tolerance for accepting a rotation matrix.
inline constexpr double kRotationTol = 1e-9;

bool is_rotation(const Mat3& R, double tol = kRotationTol);

// Pitch from a rotation matrix: atan2(R31, sqrt(R32^2 + R33^2)).
// Result lies in (-pi/2, pi/2].
double extract_pitch(const Mat3& R);

// Roll from a rotation matrix: atan2(-R32/cos p, R33/cos p) with
// p = extract_pitch(R). Throws GimbalLockError when |cos p| <= tolerance.
double extract_roll(const Mat3& R);

// ZYX-composed rotation such that extract_roll/extract_pitch recover the
// arguments exactly and any extra yaw leaves them unchanged.
Mat3 rotation_zyx(double roll, double pitch, double yaw);

// Terrain inclination from attitude: arccos(cos(roll) * cos(pitch)).
double slope_from_attitude(double roll, double pitch);

// (roll, pitch) of the yaw-free attitude whose body z-axis equals the given
// upward plane normal (normal.z() must be > 0; need not be unit length).
void attitude_from_normal(const Vec3& normal, double& roll, double& pitch);

}  // namespace vegnav::geom
