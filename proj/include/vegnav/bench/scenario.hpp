#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vegnav/planner/pe_rrt_star.hpp"
#include "vegnav/support/estimator.hpp"
#include "vegnav/world/world.hpp"

namespace vegnav::bench {

// One benchmark configuration: a world, a prior traverse for GP training,
// planner start/goal, estimation mode, and the seed list. Scenario files are
// sectioned key = value text:
//
//   [scenario]
//   name = meadow            # defaults to the file stem
//   world = ../worlds/meadow.world   # relative to the scenario file
//   start = -8 0
//   goal = 8 0
//   mode = fused             # fused | surf_only | pro_only
//   seeds = 1..20            # or an explicit list: 1 2 3 5 8
//   [traverse]
//   waypoints = -9 -3  -4 -1  0 0   # flattened x y pairs
//   stride = 0.3
//   [planner]    step / neighbor_radius / inflation_r / goal_radius /
//                max_iters / refit_interval
//   [estimation] radius / ransac_iters / inlier_threshold / min_points /
//                kappa_r / kappa_p
//   [traversability] alpha (3 values) / s_crit / eps_crit / h_crit / mu
//   [gp]         history_n / min_stride / sigma_n_pro / fit_budget
struct Scenario {
    std::string name;
    std::string world_path;
    world::WorldModel world;
    geom::Vec2 start{0.0, 0.0};
    geom::Vec2 goal{0.0, 0.0};
    support::EstimationMode mode = support::EstimationMode::kFused;
    std::vector<std::uint64_t> seeds;

    std::vector<geom::Vec2> traverse_waypoints;
    double traverse_stride = 0.3;

    planner::PlannerConfig planner_cfg;
    support::SurfFitConfig surf_cfg;
    support::TraversabilityConfig trav_cfg;
    support::GpConfig gp_cfg;
    std::size_t history_n = 50;
    double history_min_stride = 0.05;
};

Scenario load_scenario(const std::string& path);

}  // namespace vegnav::bench
