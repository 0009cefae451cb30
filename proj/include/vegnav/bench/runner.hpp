#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vegnav/bench/scenario.hpp"

namespace vegnav::bench {

struct RunMetrics {
    std::string scenario;
    std::string mode;
    std::uint64_t seed = 0;
    bool success = false;
    double path_len = 0.0;     // m, 2D polyline length
    double safety_deg = 0.0;   // m, min path distance to true obstacle boundaries
    double comp_time = 0.0;    // s, wall time of the planning call
    double fit_time = 0.0;     // s, initial model fitting (reported separately)
    double est_rmse_z = 0.0;   // m, path-node support height error vs ground truth
    double est_rmse_slope = 0.0;  // rad
    planner::PlanStatus status = planner::PlanStatus::kNoPath;
};

struct RunOverrides {
    std::optional<support::EstimationMode> mode;
    std::optional<std::vector<std::uint64_t>> seeds;
    bool zero_time = false;  // write comp_time/fit_time as 0 for byte-stable output
};

struct ScenarioResult {
    std::vector<RunMetrics> runs;
    std::size_t successes = 0;
};

// Per-run artifacts beyond the metrics, for `plan` output files.
struct RunArtifacts {
    planner::PlanResult plan;
    std::vector<std::string> node_dump;  // debug record per path node
};

// Runs one seed of a scenario end to end: cloud + traverse simulation, model
// fitting, planning, and ground-truth scoring.
RunMetrics run_single(const Scenario& scenario, std::uint64_t seed,
                      support::EstimationMode mode, RunArtifacts* artifacts = nullptr);

// All seeds; per-seed planner failures are recorded, not fatal.
ScenarioResult run_scenario(const Scenario& scenario, const RunOverrides& overrides = {});

// CSV with the fixed header
//   scenario,mode,seed,success,path_len,safety_deg,comp_time,est_rmse_z,est_rmse_slope
// one row per run, in run order.
std::string to_csv(const std::vector<RunMetrics>& runs, bool zero_time = false);
void export_csv(const std::vector<RunMetrics>& runs, const std::string& path,
                bool zero_time = false);

// Min 2D distance from the densely sampled path polyline to the true obstacle
// boundaries (+inf when the world has no obstacles).
double path_safety_degree(const planner::PlanResult& plan, const world::WorldModel& world);

}  // namespace vegnav::bench
