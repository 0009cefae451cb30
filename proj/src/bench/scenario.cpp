#include "vegnav/bench/scenario.hpp"

#include <filesystem>

#include "vegnav/errors.hpp"
#include "vegnav/util/config_file.hpp"
#include "vegnav/world/world_file.hpp"

namespace vegnav::bench {

namespace {

using util::ConfigFile;

geom::Vec2 get_vec2(const ConfigFile& cf, const std::string& section, const std::string& key) {
    const auto v = cf.get_doubles(section, key);
    if (v.size() != 2)
        throw ConfigError(cf.origin() + ": [" + section + "] " + key + " wants x y");
    return {v[0], v[1]};
}

std::vector<std::uint64_t> parse_seeds(const std::vector<std::string>& tokens,
                                       const std::string& origin) {
    std::vector<std::uint64_t> seeds;
    for (const auto& t : tokens) {
        const auto dots = t.find("..");
        if (dots != std::string::npos) {
            const long lo = std::stol(t.substr(0, dots));
            const long hi = std::stol(t.substr(dots + 2));
            if (lo < 0 || hi < lo) throw ConfigError(origin + ": bad seed range " + t);
            for (long s = lo; s <= hi; ++s) seeds.push_back(static_cast<std::uint64_t>(s));
        } else {
            const long s = std::stol(t);
            if (s < 0) throw ConfigError(origin + ": negative seed " + t);
            seeds.push_back(static_cast<std::uint64_t>(s));
        }
    }
    if (seeds.empty()) throw ConfigError(origin + ": empty seed list");
    return seeds;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
    const ConfigFile cf = ConfigFile::load(path);
    const std::filesystem::path file(path);

    const std::string world_rel = cf.get_string("scenario", "world");
    std::filesystem::path world_path(world_rel);
    if (world_path.is_relative()) world_path = file.parent_path() / world_path;

    Scenario sc{.name = cf.get_string("scenario", "name", file.stem().string()),
                .world_path = world_path.string(),
                .world = world::load_world(world_path.string()),
                .start = {},
                .goal = {},
                .mode = support::EstimationMode::kFused,
                .seeds = {},
                .traverse_waypoints = {},
                .traverse_stride = 0.3,
                .planner_cfg = {},
                .surf_cfg = {},
                .trav_cfg = {},
                .gp_cfg = {},
                .history_n = 50,
                .history_min_stride = 0.05};

    sc.start = get_vec2(cf, "scenario", "start");
    sc.goal = get_vec2(cf, "scenario", "goal");
    sc.mode = support::parse_mode(cf.get_string("scenario", "mode", "fused"));
    {
        const auto es = cf.entries("scenario", "seeds");
        if (es.size() != 1) throw ConfigError(path + ": [scenario] needs one 'seeds' entry");
        sc.seeds = parse_seeds(es.front()->values, path);
    }

    const auto wps = cf.get_doubles("traverse", "waypoints");
    if (wps.size() < 4 || wps.size() % 2 != 0)
        throw ConfigError(path + ": [traverse] waypoints wants >= 2 x y pairs");
    for (std::size_t i = 0; i + 1 < wps.size(); i += 2)
        sc.traverse_waypoints.emplace_back(wps[i], wps[i + 1]);
    sc.traverse_stride = cf.get_double("traverse", "stride", 0.3);
    if (sc.traverse_stride <= 0.0) throw ConfigError(path + ": stride must be > 0");

    auto& pc = sc.planner_cfg;
    pc.step = cf.get_double("planner", "step", pc.step);
    pc.neighbor_radius = cf.get_double("planner", "neighbor_radius", 1.5 * pc.step);
    pc.inflation_r = cf.get_double("planner", "inflation_r", pc.inflation_r);
    pc.goal_radius = cf.get_double("planner", "goal_radius", pc.goal_radius);
    pc.max_iters = static_cast<int>(cf.get_long("planner", "max_iters", pc.max_iters));
    pc.refit_interval =
        static_cast<int>(cf.get_long("planner", "refit_interval", pc.refit_interval));
    if (!pc.valid()) throw ConfigError(path + ": invalid [planner] section");

    auto& fc = sc.surf_cfg;
    fc.radius = cf.get_double("estimation", "radius", fc.radius);
    fc.ransac_iters = static_cast<int>(cf.get_long("estimation", "ransac_iters", fc.ransac_iters));
    fc.inlier_threshold = cf.get_double("estimation", "inlier_threshold", fc.inlier_threshold);
    fc.min_points = static_cast<int>(cf.get_long("estimation", "min_points", fc.min_points));
    fc.kappa_r = cf.get_double("estimation", "kappa_r", fc.kappa_r);
    fc.kappa_p = cf.get_double("estimation", "kappa_p", fc.kappa_p);
    if (!fc.valid()) throw ConfigError(path + ": invalid [estimation] section");

    auto& tc = sc.trav_cfg;
    const auto alphas =
        cf.get_doubles("traversability", "alpha", {tc.alpha1, tc.alpha2, tc.alpha3});
    if (alphas.size() != 3) throw ConfigError(path + ": alpha wants three weights");
    tc.alpha1 = alphas[0];
    tc.alpha2 = alphas[1];
    tc.alpha3 = alphas[2];
    tc.s_crit = cf.get_double("traversability", "s_crit", tc.s_crit);
    tc.eps_crit = cf.get_double("traversability", "eps_crit", tc.eps_crit);
    tc.h_crit = cf.get_double("traversability", "h_crit", tc.h_crit);
    tc.mu = cf.get_double("traversability", "mu", tc.mu);
    if (!tc.valid()) throw ConfigError(path + ": invalid [traversability] section");

    sc.history_n = static_cast<std::size_t>(cf.get_long("gp", "history_n", 50));
    sc.history_min_stride = cf.get_double("gp", "min_stride", 0.05);
    sc.gp_cfg.sigma_n_pro = cf.get_double("gp", "sigma_n_pro", sc.gp_cfg.sigma_n_pro);
    sc.gp_cfg.fit_budget =
        static_cast<int>(cf.get_long("gp", "fit_budget", sc.gp_cfg.fit_budget));
    sc.gp_cfg.refit_budget =
        static_cast<int>(cf.get_long("gp", "refit_budget", sc.gp_cfg.refit_budget));
    sc.gp_cfg.refit_interval = pc.refit_interval;
    if (sc.history_n < 2 || sc.history_min_stride <= 0.0 || sc.gp_cfg.sigma_n_pro < 0.0 ||
        sc.gp_cfg.fit_budget < 1)
        throw ConfigError(path + ": invalid [gp] section");

    return sc;
}

}  // namespace vegnav::bench
