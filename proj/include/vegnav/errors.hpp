#pragma once

#include <stdexcept>
#include <string>

namespace vegnav {

// Numeric failure of a Gram/covariance factorization. Callers widen the
// noise floor or drop the offending sample.
struct IllConditionedError : std::runtime_error {
    explicit IllConditionedError(const std::string& what) : std::runtime_error(what) {}
};

// |cos(pitch)| fell below the singularity tolerance; the pose sample is
// unusable for roll extraction.
struct GimbalLockError : std::runtime_error {
    explicit GimbalLockError(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfBoundsError : std::runtime_error {
    explicit OutOfBoundsError(const std::string& what) : std::runtime_error(what) {}
};

// Two plane channels both claim zero variance while disagreeing on the value.
struct DegenerateVarianceError : std::runtime_error {
    explicit DegenerateVarianceError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// The planner start node fell inside a new obstacle's inflation disk.
struct RootPrunedError : std::runtime_error {
    explicit RootPrunedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace vegnav
