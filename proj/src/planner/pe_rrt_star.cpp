#include "vegnav/planner/pe_rrt_star.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vegnav/errors.hpp"
#include "vegnav/util/rng.hpp"

namespace vegnav::planner {

InformedSampler::InformedSampler(Rect2 bounds, Vec2 start, Vec2 goal, std::uint64_t seed)
    : bounds_(bounds),
      start_(start),
      goal_(goal),
      c_min_((goal - start).norm()),
      angle_(std::atan2(goal.y() - start.y(), goal.x() - start.x())),
      rng_(util::make_rng(seed, 0x5a31)) {}

Vec2 InformedSampler::sample(std::optional<double> best_euclidean_len) {
    if (!best_euclidean_len) {
        const double x = bounds_.min.x() + unit_(rng_) * bounds_.width();
        const double y = bounds_.min.y() + unit_(rng_) * bounds_.height();
        return {x, y};
    }
    const double c_best = std::max(*best_euclidean_len, c_min_);
    const Vec2 center = 0.5 * (start_ + goal_);
    if (c_best - c_min_ < 1e-12) {
        // Degenerate ellipse: the start-goal segment.
        return start_ + unit_(rng_) * (goal_ - start_);
    }
    // Uniform point in the unit disk, stretched to the ellipse axes and
    // rotated into the start->goal frame.
    const double r = std::sqrt(unit_(rng_));
    const double phi = 2.0 * M_PI * unit_(rng_);
    const double ux = r * std::cos(phi);
    const double uy = r * std::sin(phi);
    const double a = 0.5 * c_best;
    const double b = 0.5 * std::sqrt(c_best * c_best - c_min_ * c_min_);
    const double ex = a * ux, ey = b * uy;
    const double ca = std::cos(angle_), sa = std::sin(angle_);
    return center + Vec2(ca * ex - sa * ey, sa * ex + ca * ey);
}

Vec2 steer(const Vec2& nearest, const Vec2& rand, double step) {
    const Vec2 delta = rand - nearest;
    const double d = delta.norm();
    if (d <= step) return rand;
    return nearest + (step / d) * delta;
}

namespace {

struct Incumbent {
    int goal_node = -1;
    double cost = std::numeric_limits<double>::infinity();
    double euclidean_len = 0.0;
};

double path_euclidean_len(const PlannerTree& tree, const std::vector<int>& ids) {
    double len = 0.0;
    for (std::size_t i = 1; i < ids.size(); ++i)
        len += (tree.node(ids[i]).pos() - tree.node(ids[i - 1]).pos()).norm();
    return len;
}

// Min-cost member of the goal set, with its path length.
std::optional<Incumbent> best_solution(const PlannerTree& tree, const std::vector<int>& goal_set) {
    Incumbent best;
    for (const int id : goal_set) {
        if (!tree.node(id).alive) continue;
        if (tree.node(id).cost < best.cost) {
            best.cost = tree.node(id).cost;
            best.goal_node = id;
        }
    }
    if (best.goal_node == -1) return std::nullopt;
    best.euclidean_len = path_euclidean_len(tree, tree.path_to_root(best.goal_node));
    return best;
}

void audit_safety(const PlannerTree& tree, const ObstacleSet& obstacles, double inflation_r) {
    for (std::size_t i = 0; i < tree.slot_count(); ++i) {
        const auto& n = tree.node(static_cast<int>(i));
        if (!n.alive) continue;
        if (!obstacles.clear_of(n.pos(), inflation_r))
            throw std::logic_error("audit: tree node inside an inflation disk");
    }
}

}  // namespace

PlanResult plan(const Vec2& start, const Vec2& goal, support::SupportEstimator& estimator,
                const Rect2& bounds, const PlannerConfig& cfg) {
    if (!cfg.valid()) throw ConfigError("plan: invalid planner config");
    if ((start - goal).norm() < 1e-9) throw ConfigError("plan: start equals goal");

    PlanResult result;

    const auto root_est = estimator.estimate(start);
    if (!root_est || root_est->is_obstacle) {
        result.status = PlanStatus::kStartNotEstimable;
        return result;
    }

    PlannerTree tree;
    tree.add_root(*root_est);
    ObstacleSet obstacles;
    InformedSampler sampler(bounds, start, goal, cfg.seed);
    std::vector<int> goal_set;
    std::optional<Incumbent> incumbent;
    int accepted_since_refit = 0;

    const auto edge_clear = [&](const Vec2& a, const Vec2& b) {
        for (const auto& c : obstacles.centers())
            if (point_segment_dist(c, a, b) <= cfg.inflation_r) return false;
        return true;
    };

    bool prune_event = false;
    const auto record_obstacle = [&](const Vec2& center) {
        const int removed = tree.prune_within(center, cfg.inflation_r) +
                            tree.prune_edges_within(center, cfg.inflation_r);
        obstacles.add(center);
        if (removed > 0) {
            prune_event = true;
            ++result.prune_events;
        }
        // The node-vs-obstacle relation only changes when a node or an
        // obstacle appears, so checking here and at insertion covers every
        // iteration.
        if (cfg.audit_invariants) audit_safety(tree, obstacles, cfg.inflation_r);
    };

    // One tree-expansion attempt; leaves the tree unchanged on any rejection.
    const auto expand = [&]() {
        const Vec2 x_rand = sampler.sample(
            incumbent ? std::optional<double>(incumbent->euclidean_len) : std::nullopt);
        const int nearest_id = tree.nearest(x_rand);
        const Vec2 x_nearest = tree.node(nearest_id).pos();
        if ((x_rand - x_nearest).norm() <= 1e-12) return;
        const Vec2 x_new = steer(x_nearest, x_rand, cfg.step);

        const auto est = estimator.estimate(x_new);
        if (!est) return;
        if (est->is_obstacle) {
            record_obstacle(x_new);
            return;
        }
        if (!inflation_check(x_new, obstacles, cfg.inflation_r)) return;

        const auto neighbor_ids = tree.neighbors(x_new, cfg.neighbor_radius);
        std::vector<int> feasible;
        feasible.reserve(neighbor_ids.size());
        for (const int id : neighbor_ids) {
            // Duplicate positions would create zero-length edges.
            if ((tree.node(id).pos() - x_new).norm() < 1e-9) return;
            if (edge_clear(tree.node(id).pos(), x_new)) feasible.push_back(id);
        }
        if (feasible.empty()) return;
        const int parent = tree.find_parent(feasible, x_new, est->tau);

        // Long steps could tunnel through a thin obstacle between two clear
        // nodes; validate the edge midpoint when the step exceeds the fit
        // diameter.
        if (cfg.step > 2.0 * estimator.surf_config().radius) {
            const Vec2 mid = 0.5 * (tree.node(parent).pos() + x_new);
            const auto mid_est = estimator.estimate(mid);
            if (!mid_est) return;
            if (mid_est->is_obstacle) {
                record_obstacle(mid);
                return;
            }
        }

        const int new_id = tree.insert(*est, parent);
        tree.rewire(new_id, feasible, edge_clear);
        if (cfg.audit_invariants && !obstacles.clear_of(x_new, cfg.inflation_r))
            throw std::logic_error("audit: inserted node inside an inflation disk");
        if ((x_new - goal).norm() <= cfg.goal_radius) goal_set.push_back(new_id);

        ++accepted_since_refit;
        if (cfg.refit_interval > 0 && accepted_since_refit >= cfg.refit_interval) {
            estimator.refit_models();
            accepted_since_refit = 0;
        }
    };

    try {
        for (int iter = 1; iter <= cfg.max_iters; ++iter) {
            prune_event = false;
            expand();
            incumbent = best_solution(tree, goal_set);

            TraceRow row;
            row.iter = iter;
            row.best_cost =
                incumbent ? incumbent->cost : std::numeric_limits<double>::infinity();
            row.tree_size = tree.alive_count();
            row.obstacles = obstacles.size();
            row.prune_event = prune_event;
            result.trace.push_back(row);

            if (cfg.audit_invariants) tree.validate();
        }
    } catch (const RootPrunedError&) {
        result.status = PlanStatus::kRootPruned;
        result.obstacles = obstacles.centers();
        result.tree_size = tree.alive_count();
        return result;
    }

    result.obstacles = obstacles.centers();
    result.tree_size = tree.alive_count();
    if (!incumbent) {
        result.status = PlanStatus::kNoPath;
        return result;
    }

    result.status = PlanStatus::kSuccess;
    result.path_cost = incumbent->cost;
    result.path_length = incumbent->euclidean_len;
    for (const int id : tree.path_to_root(incumbent->goal_node))
        result.path.push_back({tree.node(id).estimate, tree.node(id).cost});
    return result;
}

std::string path_to_text(const PlanResult& result) {
    std::ostringstream os;
    os.precision(9);
    for (const auto& n : result.path) {
        const auto& s = n.estimate.s_plane;
        os << s.x << ' ' << s.y << ' ' << s.z << ' ' << s.roll << ' ' << s.pitch << ' '
           << n.estimate.tau << ' ' << n.cost << '\n';
    }
    return os.str();
}

std::string trace_to_text(const PlanResult& result) {
    std::ostringstream os;
    os.precision(9);
    for (const auto& r : result.trace)
        os << r.iter << ' ' << r.best_cost << ' ' << r.tree_size << ' ' << r.obstacles << '\n';
    return os.str();
}

}  // namespace vegnav::planner
