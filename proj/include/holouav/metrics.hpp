#pragma once

#include <cmath>
#include <stdexcept>

#include "holouav/channel.hpp"
#include "holouav/surface.hpp"
#include "holouav/types.hpp"

namespace holouav {

// Mutable optimizer state: UAV position, element amplitudes, fixed phase
// matrix, digital precoder, per-user noise power, and the channel cache for
// the current position.
template <typename Scalar>
struct BeamformingState {
    Vec3<Scalar> uav_position = Vec3<Scalar>::Zero();
    VecX<Scalar> weights;           // M, each in [0, 1]
    PhaseMatrix<Scalar> phase;      // M x K, unit modulus
    CMatX<Scalar> precoder;         // K x D, column d serves user d
    VecX<Scalar> noise_power;       // D, watts (identical entries in all stock scenarios)
    ChannelSet<Scalar> channels;    // cache for uav_position

    Index num_elements() const { return weights.size(); }
    Index num_users() const { return precoder.cols(); }
};

template <typename Scalar>
BeamformingState<Scalar> make_state(const Vec3<Scalar>& uav_position, VecX<Scalar> weights,
                                    PhaseMatrix<Scalar> phase, CMatX<Scalar> precoder,
                                    Scalar noise_power, ChannelSet<Scalar> channels) {
    if (!(noise_power > Scalar(0)))
        throw std::invalid_argument("make_state: noise power must be positive");
    if (weights.size() != phase.rows() || phase.cols() != precoder.rows() ||
        channels.vectors.rows() != weights.size() || channels.num_users() != precoder.cols())
        throw std::invalid_argument("make_state: dimension mismatch");
    BeamformingState<Scalar> st;
    st.uav_position = uav_position;
    st.weights = std::move(weights);
    st.phase = std::move(phase);
    st.precoder = std::move(precoder);
    st.noise_power = VecX<Scalar>::Constant(st.precoder.cols(), noise_power);
    st.channels = std::move(channels);
    return st;
}

// W = diag(weights) * phase: row m of the phase matrix scaled by weight m.
template <typename Scalar>
CMatX<Scalar> holographic_matrix(const VecX<Scalar>& weights, const PhaseMatrix<Scalar>& phase) {
    if (weights.size() != phase.rows())
        throw std::invalid_argument("holographic_matrix: weight/phase dimension mismatch");
    return weights.template cast<Complex<Scalar>>().asDiagonal() * phase;
}

namespace detail {

// b(d, k) = h_d^H W v_k for all user pairs.
template <typename Scalar>
CMatX<Scalar> pair_gains(const BeamformingState<Scalar>& st) {
    const CMatX<Scalar> w = holographic_matrix(st.weights, st.phase);
    return st.channels.vectors.adjoint() * w * st.precoder;  // D x D
}

template <typename Scalar>
Scalar sinr_from_pair_gains(const CMatX<Scalar>& b, const VecX<Scalar>& noise_power, Index d) {
    Scalar interference = Scalar(0);
    for (Index k = 0; k < b.cols(); ++k)
        if (k != d)
            interference += std::norm(b(d, k));
    return std::norm(b(d, d)) / (interference + noise_power(d));
}

} // namespace detail

template <typename Scalar>
Scalar sinr(const BeamformingState<Scalar>& st, Index d) {
    return detail::sinr_from_pair_gains(detail::pair_gains(st), st.noise_power, d);
}

// Sum rate in bits/s/Hz.
template <typename Scalar>
Scalar sum_rate(const BeamformingState<Scalar>& st) {
    const CMatX<Scalar> b = detail::pair_gains(st);
    Scalar rate = Scalar(0);
    for (Index d = 0; d < st.num_users(); ++d)
        rate += std::log2(Scalar(1) + detail::sinr_from_pair_gains(b, st.noise_power, d));
    return rate;
}

} // namespace holouav
