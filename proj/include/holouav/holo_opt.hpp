#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "holouav/metrics.hpp"
#include "holouav/types.hpp"

namespace holouav {

// Per-element decomposition of every received gain b(d,k) = h_d^H W v_k.
// The per-element factors do not depend on the amplitude vector, so one
// decomposition serves a whole gradient-ascent run; only u and u_cross are
// refreshed when the amplitudes move.
template <typename Scalar>
struct HoloGradientWorkspace {
    CVecX<Scalar> u;            // D, u(d) = per_element_signal.row(d) * w
    CMatX<Scalar> u_cross;      // D x D, u_cross(d,k) = per_element_interf[d].row(k) * w; diagonal unused
    CMatX<Scalar> per_element_signal;              // D x M, (d,m) = conj(h_{d,m}) (phase*v_d)_m
    std::vector<CMatX<Scalar>> per_element_interf; // D entries, each D x M, [d](k,m) = conj(h_{d,m}) (phase*v_k)_m

    Index num_users() const { return u.size(); }
    Index num_elements() const { return per_element_signal.cols(); }
};

struct HoloOptConfig {
    double eta = 0.01;          // gradient-ascent step size
    double epsilon = 1e-5;      // convergence threshold on |delta R|
    int max_iters = 500;
    bool monotone_guard = true; // reject steps that lower the rate, halving eta locally
    int max_backtracks = 20;
    bool use_weight_delta = false; // converge on ||delta w|| instead of |delta R|
};

template <typename Scalar>
struct HoloResult {
    VecX<Scalar> weights;
    int iterations = 0;
    std::vector<Scalar> trace; // sum rate before the loop, then after each accepted step
    int guard_events = 0;      // iterations where at least one backtrack fired
};

// Recompute the amplitude-dependent sums for a new weight vector.
template <typename Scalar>
void refresh(HoloGradientWorkspace<Scalar>& ws, const VecX<Scalar>& weights) {
    const CVecX<Scalar> wc = weights.template cast<Complex<Scalar>>();
    ws.u = ws.per_element_signal * wc;
    for (Index d = 0; d < ws.num_users(); ++d)
        ws.u_cross.row(d) = (ws.per_element_interf[static_cast<std::size_t>(d)] * wc).transpose();
}

template <typename Scalar>
HoloGradientWorkspace<Scalar> decompose(const BeamformingState<Scalar>& st) {
    const Index d_users = st.num_users();
    const Index m = st.num_elements();
    const CMatX<Scalar> phase_v = st.phase * st.precoder; // M x D, column k = phase * v_k

    HoloGradientWorkspace<Scalar> ws;
    ws.per_element_signal.resize(d_users, m);
    ws.per_element_interf.resize(static_cast<std::size_t>(d_users));
    for (Index d = 0; d < d_users; ++d) {
        const CVecX<Scalar> h_conj = st.channels.vectors.col(d).conjugate();
        CMatX<Scalar>& interf = ws.per_element_interf[static_cast<std::size_t>(d)];
        interf.resize(d_users, m);
        for (Index k = 0; k < d_users; ++k)
            interf.row(k) = (h_conj.array() * phase_v.col(k).array()).transpose();
        ws.per_element_signal.row(d) = interf.row(d);
    }
    ws.u.resize(d_users);
    ws.u_cross.resize(d_users, d_users);
    refresh(ws, st.weights);
    return ws;
}

namespace detail {

template <typename Scalar>
Scalar interference_power(const HoloGradientWorkspace<Scalar>& ws, Index d) {
    Scalar total = Scalar(0);
    for (Index k = 0; k < ws.num_users(); ++k)
        if (k != d)
            total += std::norm(ws.u_cross(d, k));
    return total;
}

template <typename Scalar>
Scalar sum_rate_from(const HoloGradientWorkspace<Scalar>& ws, const VecX<Scalar>& noise_power) {
    Scalar rate = Scalar(0);
    for (Index d = 0; d < ws.num_users(); ++d) {
        const Scalar sinr = std::norm(ws.u(d)) / (interference_power(ws, d) + noise_power(d));
        rate += std::log2(Scalar(1) + sinr);
    }
    return rate;
}

} // namespace detail

// Analytic gradient of the sum rate with respect to the element amplitudes,
// assembled per user from the quotient rule on |u_d|^2 / (interference + noise).
template <typename Scalar>
VecX<Scalar> grad_weights(const HoloGradientWorkspace<Scalar>& ws, const VecX<Scalar>& noise_power) {
    const Scalar inv_ln2 = Scalar(1) / std::log(Scalar(2));
    VecX<Scalar> grad = VecX<Scalar>::Zero(ws.num_elements());
    for (Index d = 0; d < ws.num_users(); ++d) {
        const Scalar num = std::norm(ws.u(d));
        const Scalar den = detail::interference_power(ws, d) + noise_power(d);

        const VecX<Scalar> grad_num =
            Scalar(2) * (ws.per_element_signal.row(d) * std::conj(ws.u(d))).real().transpose();
        CVecX<Scalar> cross = ws.u_cross.row(d).conjugate().transpose();
        cross(d) = Complex<Scalar>(0);
        const VecX<Scalar> grad_den =
            Scalar(2) *
            (cross.transpose() * ws.per_element_interf[static_cast<std::size_t>(d)]).real().transpose();

        // d SINR / dw divided by (1 + SINR), with SINR = num/den.
        grad += inv_ln2 * (den * grad_num - num * grad_den) / (den * (den + num));
    }
    return grad;
}

template <typename Scalar>
VecX<Scalar> grad_weights(const BeamformingState<Scalar>& st) {
    return grad_weights(decompose(st), st.noise_power);
}

// Feasible set for the amplitudes is the unit box.
template <typename Scalar>
VecX<Scalar> project_weights(const VecX<Scalar>& weights) {
    return weights.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
}

// Projected gradient ascent on the amplitudes with the precoder and position
// held fixed.  With the guard on, a step that lowers the rate is retried at
// half the step size; if every retry fails the loop stops where it stands.
template <typename Scalar>
HoloResult<Scalar> optimize_weights(const BeamformingState<Scalar>& st, const HoloOptConfig& cfg) {
    HoloGradientWorkspace<Scalar> ws = decompose(st);
    VecX<Scalar> w = project_weights<Scalar>(st.weights);
    refresh(ws, w);

    HoloResult<Scalar> result;
    Scalar rate = detail::sum_rate_from(ws, st.noise_power);
    result.trace.push_back(rate);

    const Scalar guard_slack = Scalar(1e-12);
    for (int t = 1; t <= cfg.max_iters; ++t) {
        const VecX<Scalar> grad = grad_weights(ws, st.noise_power);
        Scalar step = Scalar(cfg.eta);
        VecX<Scalar> w_new = project_weights<Scalar>(w + step * grad);
        refresh(ws, w_new);
        Scalar rate_new = detail::sum_rate_from(ws, st.noise_power);

        if (cfg.monotone_guard && rate_new < rate - guard_slack) {
            ++result.guard_events;
            int backtracks = 0;
            while (rate_new < rate - guard_slack && backtracks < cfg.max_backtracks) {
                step /= Scalar(2);
                w_new = project_weights<Scalar>(w + step * grad);
                refresh(ws, w_new);
                rate_new = detail::sum_rate_from(ws, st.noise_power);
                ++backtracks;
            }
            if (rate_new < rate - guard_slack) {
                refresh(ws, w); // keep the current point
                result.iterations = t;
                break;
            }
        }

        const Scalar delta_w = (w_new - w).norm();
        const Scalar delta_r = std::abs(rate_new - rate);
        w = std::move(w_new);
        rate = rate_new;
        result.trace.push_back(rate);
        result.iterations = t;
        const bool converged =
            cfg.use_weight_delta ? delta_w < Scalar(cfg.epsilon) : delta_r < Scalar(cfg.epsilon);
        if (converged)
            break;
    }

    result.weights = std::move(w);
    return result;
}

} // namespace holouav
