#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "holouav/channel.hpp"
#include "holouav/errors.hpp"
#include "holouav/holo_opt.hpp"
#include "holouav/metrics.hpp"
#include "holouav/position_opt.hpp"
#include "holouav/rng.hpp"
#include "holouav/scenario.hpp"
#include "holouav/surface.hpp"
#include "holouav/types.hpp"
#include "holouav/zf.hpp"

namespace holouav {

struct OuterIteration {
    double sum_rate = 0.0; // bits/s/Hz after the full pass
    Vec3<double> q = Vec3<double>::Zero();
    int inner_holo_iters = 0;
    double delta_r = 0.0; // |change| against the previous outer value
    int guard_events = 0; // backtracked amplitude steps + kept precoders + kept positions
    // Feasibility snapshot, kept so finished traces are auditable without a re-run.
    double weight_min = 0.0;
    double weight_max = 0.0;
    double total_power = 0.0;
};

struct OptTrace {
    double initial_sum_rate = 0.0;
    std::vector<OuterIteration> iterations;
};

struct DriverConfig {
    double eps_tol = 1e-4; // outer convergence threshold on |delta R|
    int max_outer = 200;
    HoloOptConfig holo;
    PositionOptConfig pos;
    bool guards = true; // keep previous precoder / halve the position step on a rate drop
    int pos_max_backtracks = 20;

    enum class WeightInit { Half, Random };
    WeightInit weight_init = WeightInit::Half;
};

// Raw update rules with every acceptance guard disabled.
inline DriverConfig paper_faithful_config(DriverConfig cfg) {
    cfg.guards = false;
    cfg.holo.monotone_guard = false;
    return cfg;
}

struct RunResult {
    BeamformingState<double> state;
    OptTrace trace;
    double final_sum_rate = 0.0;
    int outer_iters = 0;
    bool converged = false;
};

namespace detail {

inline CMatX<double> zf_precoder(const ChannelSet<double>& channels, const VecX<double>& weights,
                                 const PhaseMatrix<double>& phase, double p_max, int outer_iter) {
    if (!(p_max > 0.0))
        return CMatX<double>::Zero(phase.cols(), channels.num_users());
    try {
        return normalize_power(zero_forcing(effective_channel(channels, weights, phase)), p_max);
    } catch (const RankDeficientError& e) {
        throw RankDeficientError(std::string(e.what()) + " (outer iteration " +
                                 std::to_string(outer_iter) + ")");
    }
}

// Sum rate the current amplitudes would achieve over another channel cache
// and precoder; used to test candidate positions without mutating state.
inline double rate_at(const BeamformingState<double>& st, const ChannelSet<double>& channels,
                      const CMatX<double>& precoder) {
    const CMatX<double> b =
        channels.vectors.adjoint() * holographic_matrix(st.weights, st.phase) * precoder;
    double rate = 0.0;
    for (Index d = 0; d < b.rows(); ++d)
        rate += std::log2(1.0 + sinr_from_pair_gains(b, st.noise_power, d));
    return rate;
}

inline RunResult run_impl(const Scenario& sc, const UserLayout<double>& users,
                          const DriverConfig& cfg, bool benchmark, std::uint64_t benchmark_seed,
                          const VecX<double>* initial_weights) {
    validate(sc);
    if (users.num_users() != sc.num_users)
        throw std::invalid_argument("run: user layout does not match scenario");

    const Surface<double> surface = build_surface(sc.surface);
    const Index m = sc.surface.num_elements();

    VecX<double> w0(m);
    if (initial_weights != nullptr) {
        if (initial_weights->size() != m)
            throw std::invalid_argument("run: initial weights do not match surface size");
        if ((initial_weights->array() < 0.0).any() || (initial_weights->array() > 1.0).any())
            throw std::invalid_argument("run: initial weights outside [0, 1]");
        w0 = *initial_weights;
    } else if (benchmark) {
        std::mt19937_64 engine = make_stream(benchmark_seed, 0, stream_benchmark_weights);
        for (Index i = 0; i < m; ++i)
            w0(i) = unit_double(engine);
    } else if (cfg.weight_init == DriverConfig::WeightInit::Random) {
        std::mt19937_64 engine = make_stream(sc.master_seed, sc.realization, stream_weight_init);
        for (Index i = 0; i < m; ++i)
            w0(i) = unit_double(engine);
    } else {
        w0.setConstant(0.5);
    }

    BeamformingState<double> st;
    st.uav_position = sc.q0;
    st.weights = std::move(w0);
    st.phase = phase_matrix(surface);
    st.channels = channel(st.uav_position, users, surface, sc.beta0);
    // A zero power budget keeps the precoder at zero; the noise value is then
    // irrelevant but must stay positive for the rate to be well defined.
    st.noise_power = VecX<double>::Constant(sc.num_users, sc.p_max > 0.0 ? sc.noise_power() : 1.0);
    st.precoder = zf_precoder(st.channels, st.weights, st.phase, sc.p_max, 0);

    RunResult result;
    double r_prev = sum_rate(st);
    result.trace.initial_sum_rate = r_prev;

    const double guard_slack = 1e-12;
    for (int t = 1; t <= cfg.max_outer; ++t) {
        int guard_events = 0;
        int inner_iters = 0;

        // (a) holographic amplitudes; the benchmark keeps its random draw.
        if (!benchmark) {
            HoloResult<double> hres = optimize_weights(st, cfg.holo);
            st.weights = std::move(hres.weights);
            inner_iters = hres.iterations;
            guard_events += hres.guard_events;
        }

        // (b) zero-forcing precoder against the updated amplitudes.
        {
            CMatX<double> v_new = zf_precoder(st.channels, st.weights, st.phase, sc.p_max, t);
            if (cfg.guards) {
                const double r_old = sum_rate(st);
                CMatX<double> v_prev = st.precoder;
                st.precoder = std::move(v_new);
                if (sum_rate(st) < r_old - guard_slack) {
                    st.precoder = std::move(v_prev);
                    ++guard_events;
                }
            } else {
                st.precoder = std::move(v_new);
            }
        }

        // (c) one position step.  A candidate position is judged with its own
        // re-derived precoder and both are adopted together: at high SNR the
        // interference nulls are so narrow that any useful displacement leaks
        // interference under the stale precoder, which would pin the UAV in
        // place even though the refreshed precoder recovers the rate.
        {
            const Vec3<double> grad = grad_position(st, users, surface, sc.beta0);
            if (cfg.guards) {
                const double r_old = sum_rate(st);
                PositionOptConfig trial = cfg.pos;
                bool accepted = false;
                for (int b = 0; b <= cfg.pos_max_backtracks; ++b) {
                    const Vec3<double> q_new = step_position(st.uav_position, grad, trial, sc.region);
                    ChannelSet<double> ch_new = channel(q_new, users, surface, sc.beta0);
                    CMatX<double> v_new;
                    try {
                        v_new = zf_precoder(ch_new, st.weights, st.phase, sc.p_max, t);
                    } catch (const RankDeficientError&) {
                        trial.mu_q /= 2.0; // candidate unusable, treat as rejected
                        continue;
                    }
                    if (rate_at(st, ch_new, v_new) >= r_old - guard_slack) {
                        st.uav_position = q_new;
                        st.channels = std::move(ch_new);
                        st.precoder = std::move(v_new);
                        accepted = true;
                        break;
                    }
                    trial.mu_q /= 2.0;
                }
                if (!accepted)
                    ++guard_events; // position kept; full step length returns next iteration
            } else {
                st.uav_position = step_position(st.uav_position, grad, cfg.pos, sc.region);
                st.channels = channel(st.uav_position, users, surface, sc.beta0);
            }
        }

        const double r_now = sum_rate(st);
        OuterIteration item;
        item.sum_rate = r_now;
        item.q = st.uav_position;
        item.inner_holo_iters = inner_iters;
        item.delta_r = std::abs(r_now - r_prev);
        item.guard_events = guard_events;
        item.weight_min = st.weights.minCoeff();
        item.weight_max = st.weights.maxCoeff();
        item.total_power = st.precoder.squaredNorm();
        result.trace.iterations.push_back(item);
        result.outer_iters = t;
        r_prev = r_now;
        if (item.delta_r < cfg.eps_tol) {
            result.converged = true;
            break;
        }
    }

    result.final_sum_rate = r_prev;
    result.state = std::move(st);
    return result;
}

} // namespace detail

inline RunResult run(const Scenario& sc, const UserLayout<double>& users, const DriverConfig& cfg) {
    return detail::run_impl(sc, users, cfg, false, 0, nullptr);
}

inline RunResult run(const Scenario& sc, const DriverConfig& cfg) {
    return run(sc, place_users(sc, sc.realization), cfg);
}

// Starts the amplitude ascent from an explicit vector instead of the
// configured initialization; used for matched-pair comparisons where both
// modes must share the same draw.
inline RunResult run(const Scenario& sc, const UserLayout<double>& users,
                     const VecX<double>& initial_weights, const DriverConfig& cfg) {
    return detail::run_impl(sc, users, cfg, false, 0, &initial_weights);
}

// Baseline: amplitudes drawn uniformly on [0,1] once from the given seed and
// never re-optimized; precoder and position updates run unchanged.
inline RunResult run_benchmark(const Scenario& sc, const UserLayout<double>& users,
                               const DriverConfig& cfg, std::uint64_t seed) {
    return detail::run_impl(sc, users, cfg, true, seed, nullptr);
}

inline RunResult run_benchmark(const Scenario& sc, const DriverConfig& cfg, std::uint64_t seed) {
    return run_benchmark(sc, place_users(sc, sc.realization), cfg, seed);
}

inline RunResult run_benchmark(const Scenario& sc, const UserLayout<double>& users,
                               const VecX<double>& initial_weights, const DriverConfig& cfg) {
    return detail::run_impl(sc, users, cfg, true, 0, &initial_weights);
}

} // namespace holouav
