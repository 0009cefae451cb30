#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "vegnav/planner/tree.hpp"

namespace vegnav::planner {

using geom::Rect2;

struct PlannerConfig {
    double step = 0.8;             // m, steer length
    double neighbor_radius = 1.2;  // m, RRT* rewiring neighborhood
    double inflation_r = 0.25;     // m, safety buffer around detected obstacles
    double goal_radius = 0.5;      // m, goal-region disk
    int max_iters = 3000;
    std::uint64_t seed = 0;
    int refit_interval = 10;  // accepted nodes between model refits; 0 disables
    bool audit_invariants = false;  // full tree + safety check every iteration

    bool valid() const {
        return step > 0.0 && neighbor_radius > 0.0 && inflation_r >= 0.0 && goal_radius > 0.0 &&
               max_iters >= 1;
    }
};

// Uniform sampling over the bounds until a first solution exists, then
// uniform over the informed ellipse with foci start/goal whose focal-distance
// sum is bounded by the incumbent path's 2D Euclidean length.
class InformedSampler {
public:
    InformedSampler(Rect2 bounds, Vec2 start, Vec2 goal, std::uint64_t seed);

    // best_euclidean_len: incumbent path length, or nullopt for no solution.
    Vec2 sample(std::optional<double> best_euclidean_len);

private:
    Rect2 bounds_;
    Vec2 start_, goal_;
    double c_min_;
    double angle_;  // start -> goal direction
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

Vec2 steer(const Vec2& nearest, const Vec2& rand, double step);

enum class PlanStatus { kSuccess, kNoPath, kRootPruned, kStartNotEstimable };

struct PathNode {
    SupportEstimate estimate;
    double cost = 0.0;
};

struct TraceRow {
    int iter = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t tree_size = 0;
    std::size_t obstacles = 0;
    bool prune_event = false;
};

struct PlanResult {
    PlanStatus status = PlanStatus::kNoPath;
    std::vector<PathNode> path;  // root first; empty unless kSuccess
    double path_cost = std::numeric_limits<double>::infinity();
    double path_length = 0.0;  // 2D Euclidean, m
    std::vector<TraceRow> trace;
    std::vector<Vec2> obstacles;  // detected obstacle centers
    std::size_t tree_size = 0;
    int prune_events = 0;

    bool success() const { return status == PlanStatus::kSuccess; }
};

// PE-RRT*: informed sampling, per-node support estimation, vegetation-height
// obstacle check, inflation gating with branch pruning, cost d/(1 - tau)
// parent selection and rewiring. Deterministic for a fixed (seed, inputs).
PlanResult plan(const Vec2& start, const Vec2& goal, support::SupportEstimator& estimator,
                const Rect2& bounds, const PlannerConfig& cfg);

// "x y z roll pitch tau cost" per line, root first.
std::string path_to_text(const PlanResult& result);
// "iter best_cost tree_size obstacles" per line.
std::string trace_to_text(const PlanResult& result);

}  // namespace vegnav::planner
