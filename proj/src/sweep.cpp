#include "holouav/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "holouav/errors.hpp"

namespace holouav {

VecX<double> initial_amplitudes(const Scenario& sc) {
    std::mt19937_64 engine = make_stream(sc.master_seed, sc.realization, stream_benchmark_weights);
    VecX<double> w0(sc.surface.num_elements());
    for (Index i = 0; i < w0.size(); ++i)
        w0(i) = unit_double(engine);
    return w0;
}

void validate(const SweepSpec& spec) {
    if (spec.snr_db_list.empty() || spec.size_list.empty() || spec.d_list.empty())
        throw std::invalid_argument("sweep: parameter lists must be non-empty");
    if (spec.realizations < 1)
        throw std::invalid_argument("sweep: need at least one realization");
    for (const auto& [mx, my] : spec.size_list)
        if (mx < 1 || my < 1)
            throw std::invalid_argument("sweep: surface sizes must be positive");
    for (Index d : spec.d_list)
        if (d < 1)
            throw std::invalid_argument("sweep: user counts must be positive");
}

namespace {

struct Job {
    double snr_db;
    Index mx, my;
    Index d;
    bool benchmark;
    int realization;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Filesystem-safe tag for one run: "." and "-" would be ambiguous in
// underscore-separated ids.
std::string tag(double v) {
    std::string s = fmt(v);
    for (char& c : s) {
        if (c == '.') c = 'p';
        if (c == '-') c = 'm';
    }
    return s;
}

std::string run_id(const SweepRow& row) {
    return row.mode + "_snr" + tag(row.snr_db) + "_m" + std::to_string(row.m) + "_d" +
           std::to_string(row.d) + "_r" + std::to_string(row.realization);
}

void execute(const Job& job, const Scenario& base, const DriverConfig& cfg, SweepRow& row,
             OptTrace& trace) {
    Scenario sc = base;
    sc.snr_db = job.snr_db;
    sc.surface.elements_x = job.mx;
    sc.surface.elements_y = job.my;
    sc.num_users = job.d;
    sc.realization = static_cast<std::uint64_t>(job.realization);

    row.mode = job.benchmark ? "benchmark" : "proposed";
    row.snr_db = job.snr_db;
    row.m = sc.surface.num_elements();
    row.d = job.d;
    row.realization = job.realization;
    row.ok = false;
    try {
        const UserLayout<double> users = place_users(sc, sc.realization);
        const VecX<double> w0 = initial_amplitudes(sc);
        const RunResult res =
            job.benchmark ? run_benchmark(sc, users, w0, cfg) : run(sc, users, w0, cfg);
        row.final_sum_rate = res.final_sum_rate;
        row.outer_iters = res.outer_iters;
        row.q = res.state.uav_position;
        row.status = "ok";
        row.ok = true;
        trace = res.trace;
    } catch (const RankDeficientError&) {
        row.status = "rank_deficient";
    } catch (const SingularGeometryError&) {
        row.status = "singular_geometry";
    } catch (const ZeroBeamformerError&) {
        row.status = "zero_beamformer";
    } catch (const std::invalid_argument&) {
        row.status = "invalid";
    } catch (const std::exception&) {
        row.status = "error";
    }
    if (!row.ok) {
        row.final_sum_rate = std::numeric_limits<double>::quiet_NaN();
        row.outer_iters = 0;
        row.q = Vec3<double>::Constant(std::numeric_limits<double>::quiet_NaN());
    }
}

void write_results(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("sweep: cannot write " + path.string());
    out << "mode,snr_db,m,d,realization,final_sum_rate_bps_hz,outer_iters,qx,qy,qz,status\n";
    for (const SweepRow& r : rows) {
        out << r.mode << ',' << fmt(r.snr_db) << ',' << r.m << ',' << r.d << ',' << r.realization
            << ',' << fmt(r.final_sum_rate) << ',' << r.outer_iters << ',' << fmt(r.q.x()) << ','
            << fmt(r.q.y()) << ',' << fmt(r.q.z()) << ',' << r.status << '\n';
    }
}

void write_summary(const std::filesystem::path& path, const std::vector<SweepRow>& rows,
                   int realizations) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("sweep: cannot write " + path.string());
    out << "mode,snr_db,m,d,realizations,mean_sum_rate_bps_hz,std_sum_rate_bps_hz\n";
    // Rows arrive cell-by-cell, `realizations` consecutive entries each.
    for (std::size_t base = 0; base < rows.size(); base += static_cast<std::size_t>(realizations)) {
        int n = 0;
        double sum = 0.0;
        for (int i = 0; i < realizations; ++i) {
            const SweepRow& r = rows[base + static_cast<std::size_t>(i)];
            if (r.ok) {
                ++n;
                sum += r.final_sum_rate;
            }
        }
        const double mean = n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
        double var = 0.0;
        for (int i = 0; i < realizations; ++i) {
            const SweepRow& r = rows[base + static_cast<std::size_t>(i)];
            if (r.ok)
                var += (r.final_sum_rate - mean) * (r.final_sum_rate - mean);
        }
        const double stddev = n > 1 ? std::sqrt(var / (n - 1)) : 0.0;
        const SweepRow& head = rows[base];
        out << head.mode << ',' << fmt(head.snr_db) << ',' << head.m << ',' << head.d << ',' << n
            << ',' << fmt(mean) << ',' << fmt(n > 0 ? stddev : std::numeric_limits<double>::quiet_NaN())
            << '\n';
    }
}

void write_trajectory(const std::filesystem::path& path, const Scenario& base,
                      const OptTrace& trace) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("sweep: cannot write " + path.string());
    out << "t,q_x,q_y,q_z,R\n";
    out << 0 << ',' << fmt(base.q0.x()) << ',' << fmt(base.q0.y()) << ',' << fmt(base.q0.z()) << ','
        << fmt(trace.initial_sum_rate) << '\n';
    for (std::size_t t = 0; t < trace.iterations.size(); ++t) {
        const OuterIteration& it = trace.iterations[t];
        out << (t + 1) << ',' << fmt(it.q.x()) << ',' << fmt(it.q.y()) << ',' << fmt(it.q.z())
            << ',' << fmt(it.sum_rate) << '\n';
    }
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, const Scenario& base,
                      const std::filesystem::path& out_dir, const DriverConfig& cfg) {
    validate(spec);
    validate(base);
    std::filesystem::create_directories(out_dir);

    std::vector<Job> jobs;
    for (double snr : spec.snr_db_list)
        for (const auto& [mx, my] : spec.size_list)
            for (Index d : spec.d_list)
                for (int bench = 0; bench < 2; ++bench) {
                    if (bench == 0 && spec.mode == SweepMode::Benchmark)
                        continue;
                    if (bench == 1 && spec.mode == SweepMode::Proposed)
                        continue;
                    for (int r = 0; r < spec.realizations; ++r)
                        jobs.push_back({snr, mx, my, d, bench == 1, r});
                }

    std::vector<SweepRow> rows(jobs.size());
    std::vector<OptTrace> traces(jobs.size());

    // Jobs are pure functions of their parameters, so any schedule yields the
    // same rows; indices keep the output order fixed.
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned n_threads = static_cast<unsigned>(
        std::min<std::size_t>(hw, jobs.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size())
                return;
            execute(jobs[i], base, cfg, rows[i], traces[i]);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }

    SweepResult result;
    result.rows = std::move(rows);
    result.results_path = out_dir / "results.csv";
    result.summary_path = out_dir / "summary.csv";
    write_results(result.results_path, result.rows);
    write_summary(result.summary_path, result.rows, spec.realizations);
    if (spec.emit_trajectories) {
        for (std::size_t i = 0; i < result.rows.size(); ++i)
            if (result.rows[i].ok)
                write_trajectory(out_dir / ("traj_" + run_id(result.rows[i]) + ".csv"), base,
                                 traces[i]);
    }
    return result;
}

} // namespace holouav
