#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "holouav/alt_opt.hpp"

namespace holouav {

enum class SweepMode { Proposed, Benchmark, Both };

// One Monte-Carlo grid: every (snr, surface size, user count, mode)
// combination runs `realizations` independent user layouts.  Within a
// realization index both modes share the user layout and the initial
// amplitude draw, so proposed-vs-benchmark deltas are paired.
struct SweepSpec {
    std::vector<double> snr_db_list{30.0};
    std::vector<std::pair<Index, Index>> size_list{{10, 10}};
    std::vector<Index> d_list{2};
    int realizations = 20;
    SweepMode mode = SweepMode::Both;
    bool emit_trajectories = false;
};

void validate(const SweepSpec& spec);

// The per-realization amplitude draw shared by both modes of a pair: the
// benchmark keeps it, the proposed run starts its ascent from it.  Keyed by
// (master seed, realization) so the draw does not depend on which modes a
// sweep includes.
VecX<double> initial_amplitudes(const Scenario& sc);

struct SweepRow {
    std::string mode;
    double snr_db = 0.0;
    Index m = 0; // element count
    Index d = 0;
    int realization = 0;
    double final_sum_rate = 0.0;
    int outer_iters = 0;
    Vec3<double> q = Vec3<double>::Zero();
    std::string status; // "ok" or an error category
    bool ok = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::filesystem::path results_path;
    std::filesystem::path summary_path;
};

// Runs the grid and writes results.csv (one row per run), summary.csv
// (mean/std per cell) and, when requested, traj_<id>.csv files with the
// per-iteration UAV path.  Optimizer errors are recorded in the status
// column and the sweep continues.  Output is deterministic for a given
// (spec, base scenario): rows appear in snr, size, users, mode,
// realization order and floats carry 12 significant digits.
SweepResult run_sweep(const SweepSpec& spec, const Scenario& base,
                      const std::filesystem::path& out_dir, const DriverConfig& cfg = {});

} // namespace holouav
