#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holouav/config.hpp"
#include "holouav/sweep.hpp"

namespace {

using namespace holouav;

struct CommonArgs {
    std::string config_path;
    std::string mode = "proposed";
    std::vector<double> snr_db;
    std::vector<std::string> rhs;
    std::vector<Index> users;
    int realizations = 20;
    std::uint64_t seed = 0;
    std::string out_dir;
    bool paper_faithful = false;
    bool trace = false;
};

void add_common_flags(CLI::App& cmd, CommonArgs& args) {
    cmd.add_option("--config", args.config_path, "JSON config file; flags override its values")
        ->check(CLI::ExistingFile);
    cmd.add_option("--mode", args.mode, "proposed, benchmark or both")
        ->check(CLI::IsMember({"proposed", "benchmark", "both"}));
    cmd.add_option("--snr-db", args.snr_db, "SNR values in dB")->delimiter(',');
    cmd.add_option("--rhs", args.rhs, "surface sizes like 8x8,10x10")->delimiter(',');
    cmd.add_option("--users", args.users, "user counts")->delimiter(',');
    cmd.add_option("--seed", args.seed, "master seed");
    cmd.add_flag("--paper-faithful", args.paper_faithful,
                 "disable every monotone acceptance guard");
    cmd.add_flag("--trace", args.trace, "emit per-iteration trajectory files");
}

// Flags beat the config file; untouched fields keep config/defaults.
FileConfig resolve(const CLI::App& cmd, const CommonArgs& args) {
    FileConfig cfg;
    if (!args.config_path.empty())
        cfg = load_config(args.config_path);
    if (cmd.count("--mode"))
        cfg.sweep.mode = parse_mode(args.mode);
    if (cmd.count("--snr-db"))
        cfg.sweep.snr_db_list = args.snr_db;
    if (cmd.count("--rhs")) {
        cfg.sweep.size_list.clear();
        for (const std::string& n : args.rhs)
            cfg.sweep.size_list.push_back(parse_surface_size(n));
    }
    if (cmd.count("--users"))
        cfg.sweep.d_list = args.users;
    // Only the sweep subcommand defines --realizations.
    if (const CLI::Option* opt = cmd.get_option_no_throw("--realizations"); opt && opt->count())
        cfg.sweep.realizations = args.realizations;
    if (cmd.count("--seed"))
        cfg.scenario.master_seed = args.seed;
    if (args.trace)
        cfg.sweep.emit_trajectories = true;
    return cfg;
}

DriverConfig driver_for(const CommonArgs& args) {
    DriverConfig cfg;
    if (args.paper_faithful)
        cfg = paper_faithful_config(cfg);
    return cfg;
}

void write_run_trajectory(const std::filesystem::path& path, const Scenario& sc,
                          const OptTrace& trace) {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot write " + path.string());
    std::fprintf(f, "t,q_x,q_y,q_z,R\n");
    std::fprintf(f, "0,%.12g,%.12g,%.12g,%.12g\n", sc.q0.x(), sc.q0.y(), sc.q0.z(),
                 trace.initial_sum_rate);
    for (std::size_t t = 0; t < trace.iterations.size(); ++t) {
        const OuterIteration& it = trace.iterations[t];
        std::fprintf(f, "%zu,%.12g,%.12g,%.12g,%.12g\n", t + 1, it.q.x(), it.q.y(), it.q.z(),
                     it.sum_rate);
    }
    std::fclose(f);
}

int do_run(const CLI::App& cmd, const CommonArgs& args) {
    const FileConfig cfg = resolve(cmd, args);
    Scenario sc = cfg.scenario;
    if (!cfg.sweep.snr_db_list.empty())
        sc.snr_db = cfg.sweep.snr_db_list.front();
    if (!cfg.sweep.size_list.empty()) {
        sc.surface.elements_x = cfg.sweep.size_list.front().first;
        sc.surface.elements_y = cfg.sweep.size_list.front().second;
    }
    if (!cfg.sweep.d_list.empty())
        sc.num_users = cfg.sweep.d_list.front();

    const DriverConfig driver = driver_for(args);
    const UserLayout<double> users = place_users(sc, sc.realization);

    std::vector<std::pair<std::string, RunResult>> results;
    if (cfg.sweep.mode != SweepMode::Benchmark)
        results.emplace_back("proposed", run(sc, users, driver));
    if (cfg.sweep.mode != SweepMode::Proposed)
        results.emplace_back("benchmark", run_benchmark(sc, users, initial_amplitudes(sc), driver));

    for (const auto& [mode, res] : results) {
        std::printf("mode=%s m=%lld d=%lld snr_db=%.12g final_sum_rate_bps_hz=%.12g "
                    "outer_iters=%d converged=%s q=[%.12g, %.12g, %.12g]\n",
                    mode.c_str(), static_cast<long long>(sc.surface.num_elements()),
                    static_cast<long long>(sc.num_users), sc.snr_db, res.final_sum_rate,
                    res.outer_iters, res.converged ? "yes" : "no", res.state.uav_position.x(),
                    res.state.uav_position.y(), res.state.uav_position.z());
        if (args.trace) {
            const std::filesystem::path dir = args.out_dir.empty() ? "." : args.out_dir;
            std::filesystem::create_directories(dir);
            const std::filesystem::path path = dir / ("traj_run_" + mode + ".csv");
            write_run_trajectory(path, sc, res.trace);
            std::printf("wrote %s\n", path.string().c_str());
        }
    }
    return 0;
}

int do_sweep(const CLI::App& cmd, const CommonArgs& args) {
    const FileConfig cfg = resolve(cmd, args);
    const std::filesystem::path out = args.out_dir.empty() ? "out" : args.out_dir;
    const SweepResult result = run_sweep(cfg.sweep, cfg.scenario, out, driver_for(args));
    std::printf("wrote %s (%zu rows)\n", result.results_path.string().c_str(), result.rows.size());
    std::printf("wrote %s\n", result.summary_path.string().c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Holographic-surface UAV beamforming simulator: joint amplitude, "
                 "zero-forcing and position optimization with a random-amplitude benchmark"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run_cmd =
        app.add_subcommand("run", "single scenario (first value of each list), realization 0");
    add_common_flags(*run_cmd, run_args);
    run_cmd->add_option("--out", run_args.out_dir, "directory for trajectory files");

    CommonArgs sweep_args;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Monte-Carlo grid over SNR, surface size and user count");
    add_common_flags(*sweep_cmd, sweep_args);
    sweep_cmd->add_option("--realizations", sweep_args.realizations,
                          "layouts per cell (100 for full scale)")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--out", sweep_args.out_dir, "output directory (default: out)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed())
            return do_run(*run_cmd, run_args);
        if (sweep_cmd->parsed())
            return do_sweep(*sweep_cmd, sweep_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
