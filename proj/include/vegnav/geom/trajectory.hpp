#pragma once

#include <cstddef>
#include <deque>

#include "vegnav/geom/core.hpp"

namespace vegnav::geom {

struct RobotPoseSample {
    Vec3 position{0.0, 0.0, 0.0};  // m
    Mat3 rotation = Mat3::Identity();
    double time = 0.0;  // s

    // Attitude extracted once at append time.
    double roll = 0.0;   // rad
    double pitch = 0.0;  // rad
};

// The last N proprioceptive pose samples, decimated so consecutive kept
// samples are at least `min_stride` apart horizontally (near-duplicate
// inputs make the GP Gram matrix ill-conditioned).
class TrajectoryHistory {
public:
    explicit TrajectoryHistory(std::size_t capacity = 50, double min_stride = 0.05,
                               double sigma_n_pro = 1e-4)
        : capacity_(capacity), min_stride_(min_stride), sigma_n_pro_(sigma_n_pro) {}

    // Accepts the sample unless it is out of time order, closer than
    // min_stride to the last kept sample, gimbal-locked, or not a valid
    // rotation. Returns true when kept. Oldest samples fall off at capacity.
    bool append(const Vec3& position, const Mat3& rotation, double time);

    std::size_t size() const { return samples_.size(); }
    bool empty() const { return samples_.empty(); }
    const RobotPoseSample& operator[](std::size_t i) const { return samples_[i]; }
    const RobotPoseSample& back() const { return samples_.back(); }

    std::size_t capacity() const { return capacity_; }
    double min_stride() const { return min_stride_; }
    double sigma_n_pro() const { return sigma_n_pro_; }

    // n x 2 horizontal positions.
    MatX inputs() const;
    // n x 3 outputs (z, roll, pitch).
    MatX outputs_zrp() const;

private:
    std::size_t capacity_;
    double min_stride_;
    double sigma_n_pro_;  // m^2, constant odometry height variance
    std::deque<RobotPoseSample> samples_;
    bool has_last_time_ = false;
    double last_time_ = 0.0;
};

}  // namespace vegnav::geom
