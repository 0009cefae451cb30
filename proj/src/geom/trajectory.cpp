#include "vegnav/geom/trajectory.hpp"

#include "vegnav/errors.hpp"
#include "vegnav/geom/attitude.hpp"

namespace vegnav::geom {

bool TrajectoryHistory::append(const Vec3& position, const Mat3& rotation, double time) {
    if (has_last_time_ && time <= last_time_) return false;
    if (!is_rotation(rotation)) return false;
    if (!samples_.empty()) {
        const Vec2 last(samples_.back().position.x(), samples_.back().position.y());
        if (dist2d(last, Vec2(position.x(), position.y())) < min_stride_) return false;
    }

    RobotPoseSample s;
    s.position = position;
    s.rotation = rotation;
    s.time = time;
    s.pitch = extract_pitch(rotation);
    try {
        s.roll = extract_roll(rotation);
    } catch (const GimbalLockError&) {
        return false;
    }

    samples_.push_back(s);
    has_last_time_ = true;
    last_time_ = time;
    while (samples_.size() > capacity_) samples_.pop_front();
    return true;
}

MatX TrajectoryHistory::inputs() const {
    MatX X(static_cast<Eigen::Index>(samples_.size()), 2);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        X(i, 0) = samples_[static_cast<std::size_t>(i)].position.x();
        X(i, 1) = samples_[static_cast<std::size_t>(i)].position.y();
    }
    return X;
}

MatX TrajectoryHistory::outputs_zrp() const {
    MatX Y(static_cast<Eigen::Index>(samples_.size()), 3);
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
        const auto& s = samples_[static_cast<std::size_t>(i)];
        Y(i, 0) = s.position.z();
        Y(i, 1) = s.roll;
        Y(i, 2) = s.pitch;
    }
    return Y;
}

}  // namespace vegnav::geom
