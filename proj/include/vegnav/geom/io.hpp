#pragma once

#include <string>
#include <vector>

#include "vegnav/geom/core.hpp"
#include "vegnav/geom/trajectory.hpp"

namespace vegnav::geom {

// Point cloud file: one "x y z" triple per line, meters; '#' starts a comment.
std::vector<Vec3> load_cloud(const std::string& path);
void save_cloud(const std::string& path, const std::vector<Vec3>& points);

// Trajectory file: "t x y z r00 r01 r02 r10 r11 r12 r20 r21 r22" per line.
// Loaded rotations must be orthonormal; samples pass through the history's
// usual acceptance rules.
TrajectoryHistory load_trajectory(const std::string& path, std::size_t capacity = 50,
                                  double min_stride = 0.05, double sigma_n_pro = 1e-4);
void save_trajectory(const std::string& path, const TrajectoryHistory& history);

}  // namespace vegnav::geom
