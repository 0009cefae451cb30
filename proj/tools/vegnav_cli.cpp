// vegnav: support-plane-aware global path planning on synthetic vegetated
// worlds. Subcommands: plan (single run with artifacts), bench (seed sweep to
// CSV), dump-world (sample a world's point cloud to an xyz file).

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "vegnav/bench/runner.hpp"
#include "vegnav/errors.hpp"
#include "vegnav/geom/io.hpp"
#include "vegnav/world/world_file.hpp"

namespace fs = std::filesystem;
using namespace vegnav;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitOk = 0;
constexpr int kExitNoPath = 1;
constexpr int kExitConfig = 2;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

void print_metrics(const bench::RunMetrics& m) {
    std::cout << m.scenario << " mode=" << m.mode << " seed=" << m.seed
              << " success=" << (m.success ? 1 : 0);
    if (m.success) {
        std::cout << " path_len=" << m.path_len << " safety_deg=" << m.safety_deg
                  << " est_rmse_z=" << m.est_rmse_z << " est_rmse_slope=" << m.est_rmse_slope;
    }
    std::cout << " comp_time=" << m.comp_time << " fit_time=" << m.fit_time << "\n";
}

int cmd_plan(const std::string& scenario_path, const std::string& mode_override,
             long seed_override, const std::string& out_dir) {
    bench::Scenario sc = bench::load_scenario(scenario_path);
    const auto mode =
        mode_override.empty() ? sc.mode : support::parse_mode(mode_override);
    const std::uint64_t seed =
        seed_override >= 0 ? static_cast<std::uint64_t>(seed_override) : sc.seeds.front();

    bench::RunArtifacts artifacts;
    const bench::RunMetrics m = bench::run_single(sc, seed, mode, &artifacts);
    print_metrics(m);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    write_file(dir / "path.txt", planner::path_to_text(artifacts.plan));
    write_file(dir / "trace.txt", planner::trace_to_text(artifacts.plan));
    std::string dump = support::SupportEstimator::debug_dump_header() + "\n";
    for (const auto& line : artifacts.node_dump) dump += line + "\n";
    write_file(dir / "nodes.txt", dump);
    bench::export_csv({m}, (dir / "metrics.csv").string());

    return m.success ? kExitOk : kExitNoPath;
}

int cmd_bench(const std::string& input, const std::string& out_dir, bool zero_time) {
    std::vector<fs::path> files;
    const fs::path in(input);
    if (fs::is_directory(in)) {
        for (const auto& e : fs::directory_iterator(in))
            if (e.is_regular_file() && e.path().extension() == ".scn") files.push_back(e.path());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(in);
    }
    if (files.empty()) throw ConfigError("bench: no .scn scenario files in " + input);

    std::vector<bench::RunMetrics> all;
    bool any_scenario_all_failed = false;
    for (const auto& f : files) {
        const bench::Scenario sc = bench::load_scenario(f.string());
        bench::RunOverrides ov;
        const bench::ScenarioResult res = bench::run_scenario(sc, ov);
        double mean_len = 0.0, mean_time = 0.0;
        for (const auto& m : res.runs) {
            print_metrics(m);
            all.push_back(m);
            if (m.success) mean_len += m.path_len;
            mean_time += m.comp_time;
        }
        const auto n = static_cast<double>(res.runs.size());
        std::cout << "== " << sc.name << ": " << res.successes << "/" << res.runs.size()
                  << " successes";
        if (res.successes > 0)
            std::cout << ", mean path_len=" << mean_len / static_cast<double>(res.successes);
        std::cout << ", mean comp_time=" << mean_time / n << "\n";
        if (res.successes == 0) any_scenario_all_failed = true;
    }

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    bench::export_csv(all, (dir / "results.csv").string(), zero_time);
    std::cout << "wrote " << (dir / "results.csv").string() << "\n";
    return any_scenario_all_failed ? kExitNoPath : kExitOk;
}

int cmd_dump_world(const std::string& world_path, const std::string& out_path, long seed) {
    const world::WorldModel w = world::load_world(world_path);
    const auto points = world::sample_cloud(w, w.noise(), w.bounds(),
                                            static_cast<std::uint64_t>(std::max(0L, seed)));
    geom::save_cloud(out_path, points);
    std::cout << "wrote " << points.size() << " points to " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"support-plane-aware global path planner benchmark harness"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* plan_cmd = app.add_subcommand("plan", "run one planning instance, write artifacts");
    std::string plan_scenario, plan_mode, plan_out = ".";
    long plan_seed = -1;
    plan_cmd->add_option("scenario", plan_scenario, "scenario file")->required();
    plan_cmd->add_option("--mode", plan_mode, "override mode: fused|surf_only|pro_only");
    plan_cmd->add_option("--seed", plan_seed, "override seed");
    plan_cmd->add_option("--out", plan_out, "output directory");

    auto* bench_cmd = app.add_subcommand("bench", "run scenario sweep(s), export CSV");
    std::string bench_in, bench_out = ".";
    bool bench_zero_time = false;
    bench_cmd->add_option("scenarios", bench_in, "scenario file or directory of .scn files")
        ->required();
    bench_cmd->add_option("--out", bench_out, "output directory");
    bench_cmd->add_flag("--zero-time", bench_zero_time,
                        "write timing columns as 0 for byte-stable CSV comparisons");

    auto* dump_cmd = app.add_subcommand("dump-world", "sample a world's point cloud");
    std::string dump_world, dump_out = "cloud.xyz";
    long dump_seed = 0;
    dump_cmd->add_option("world", dump_world, "world file")->required();
    dump_cmd->add_option("--out", dump_out, "output .xyz path");
    dump_cmd->add_option("--seed", dump_seed, "cloud sampling seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(plan_cmd))
            return cmd_plan(plan_scenario, plan_mode, plan_seed, plan_out);
        if (app.got_subcommand(bench_cmd)) return cmd_bench(bench_in, bench_out, bench_zero_time);
        if (app.got_subcommand(dump_cmd)) return cmd_dump_world(dump_world, dump_out, dump_seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
