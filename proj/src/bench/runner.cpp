#include "vegnav/bench/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vegnav/errors.hpp"
#include "vegnav/geom/attitude.hpp"
#include "vegnav/util/rng.hpp"

namespace vegnav::bench {

namespace {

// Sub-seed streams per run component, so e.g. the planner draw sequence does
// not shift when the traverse changes.
constexpr std::uint64_t kCloudStream = 1;
constexpr std::uint64_t kTraverseStream = 2;
constexpr std::uint64_t kPlannerStream = 3;

double wall_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double path_safety_degree(const planner::PlanResult& plan, const world::WorldModel& world) {
    double best = std::numeric_limits<double>::infinity();
    constexpr double kSampleStep = 0.05;
    for (std::size_t i = 0; i < plan.path.size(); ++i) {
        const geom::Vec2 a = plan.path[i].estimate.s_plane.xy();
        best = std::min(best, world.obstacle_clearance(a));
        if (i + 1 < plan.path.size()) {
            const geom::Vec2 b = plan.path[i + 1].estimate.s_plane.xy();
            const double len = (b - a).norm();
            const int steps = static_cast<int>(std::ceil(len / kSampleStep));
            for (int k = 1; k < steps; ++k) {
                const geom::Vec2 p = a + (static_cast<double>(k) / steps) * (b - a);
                best = std::min(best, world.obstacle_clearance(p));
            }
        }
    }
    return best;
}

RunMetrics run_single(const Scenario& scenario, std::uint64_t seed,
                      support::EstimationMode mode, RunArtifacts* artifacts) {
    RunMetrics m;
    m.scenario = scenario.name;
    m.mode = support::mode_name(mode);
    m.seed = seed;

    const auto& world = scenario.world;
    const auto& noise = world.noise();

    std::optional<geom::PointCloudIndex> cloud;
    if (mode != support::EstimationMode::kProOnly) {
        cloud.emplace(world::sample_cloud(world, noise, world.bounds(),
                                          util::mix_seed(seed, kCloudStream)),
                      scenario.surf_cfg.radius);
    }
    const geom::TrajectoryHistory history = world::simulate_traverse(
        world, noise, scenario.traverse_waypoints, scenario.traverse_stride,
        util::mix_seed(seed, kTraverseStream), scenario.history_n, scenario.history_min_stride,
        scenario.gp_cfg.sigma_n_pro);

    support::SupportEstimator estimator(cloud ? &*cloud : nullptr, &history, mode,
                                        scenario.surf_cfg, scenario.trav_cfg, scenario.gp_cfg);
    const auto fit_t0 = std::chrono::steady_clock::now();
    estimator.fit_models();
    m.fit_time = wall_seconds(fit_t0);

    planner::PlannerConfig pc = scenario.planner_cfg;
    pc.seed = util::mix_seed(seed, kPlannerStream);

    const auto plan_t0 = std::chrono::steady_clock::now();
    const planner::PlanResult plan =
        planner::plan(scenario.start, scenario.goal, estimator, world.bounds(), pc);
    m.comp_time = wall_seconds(plan_t0);
    m.status = plan.status;
    m.success = plan.success();

    if (m.success) {
        m.path_len = plan.path_length;
        m.safety_deg = path_safety_degree(plan, world);
        double se_z = 0.0, se_s = 0.0;
        for (const auto& n : plan.path) {
            const auto& s = n.estimate.s_plane;
            const auto truth = world.ground_truth_plane(s.x, s.y);
            se_z += (s.z - truth.z) * (s.z - truth.z);
            const double slope_est = geom::slope_from_attitude(s.roll, s.pitch);
            const double slope_true = geom::slope_from_attitude(truth.roll, truth.pitch);
            se_s += (slope_est - slope_true) * (slope_est - slope_true);
        }
        const auto n_nodes = static_cast<double>(plan.path.size());
        m.est_rmse_z = std::sqrt(se_z / n_nodes);
        m.est_rmse_slope = std::sqrt(se_s / n_nodes);
    }

    if (artifacts) {
        artifacts->plan = plan;
        artifacts->node_dump.clear();
        for (const auto& n : plan.path)
            artifacts->node_dump.push_back(support::SupportEstimator::debug_dump_line(n.estimate));
    }
    return m;
}

ScenarioResult run_scenario(const Scenario& scenario, const RunOverrides& overrides) {
    const auto mode = overrides.mode.value_or(scenario.mode);
    const auto& seeds = overrides.seeds ? *overrides.seeds : scenario.seeds;
    ScenarioResult out;
    for (const auto seed : seeds) {
        RunMetrics m = run_single(scenario, seed, mode);
        if (m.success) ++out.successes;
        out.runs.push_back(std::move(m));
    }
    return out;
}

std::string to_csv(const std::vector<RunMetrics>& runs, bool zero_time) {
    std::ostringstream os;
    os << "scenario,mode,seed,success,path_len,safety_deg,comp_time,est_rmse_z,est_rmse_slope\n";
    os.precision(9);
    for (const auto& m : runs) {
        os << m.scenario << ',' << m.mode << ',' << m.seed << ',' << (m.success ? 1 : 0) << ',';
        if (m.success) {
            os << m.path_len << ',' << m.safety_deg << ',';
        } else {
            os << "nan,nan,";
        }
        os << (zero_time ? 0.0 : m.comp_time) << ',';
        if (m.success) {
            os << m.est_rmse_z << ',' << m.est_rmse_slope << '\n';
        } else {
            os << "nan,nan\n";
        }
    }
    return os.str();
}

void export_csv(const std::vector<RunMetrics>& runs, const std::string& path, bool zero_time) {
    std::ofstream out(path);
    if (!out) throw IoError("export_csv: cannot open " + path);
    out << to_csv(runs, zero_time);
    if (!out) throw IoError("export_csv: write failed for " + path);
}

}  // namespace vegnav::bench
