#pragma once

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "holouav/channel.hpp"
#include "holouav/errors.hpp"
#include "holouav/metrics.hpp"
#include "holouav/types.hpp"

namespace holouav {

// Effective channel seen by the digital precoder: row d is h_d^H W, so the
// result is D x K.
template <typename Scalar>
CMatX<Scalar> effective_channel(const ChannelSet<Scalar>& channels, const VecX<Scalar>& weights,
                                const PhaseMatrix<Scalar>& phase) {
    return channels.vectors.adjoint() * holographic_matrix(weights, phase);
}

inline constexpr double zf_condition_limit_sq = 1e12;

// Right pseudo-inverse V = Heff^H (Heff Heff^H)^{-1}, evaluated through a
// thin SVD for numerical stability.  Requires D <= K and full row rank;
// a squared condition number at or above zf_condition_limit_sq is rejected.
template <typename Scalar>
CMatX<Scalar> zero_forcing(const CMatX<Scalar>& effective) {
    const Index d = effective.rows();
    const Index k = effective.cols();
    if (d == 0 || k == 0)
        throw std::invalid_argument("zero_forcing: empty effective channel");
    if (d > k)
        throw RankDeficientError("zero_forcing: more users than feeds");

    Eigen::JacobiSVD<CMatX<Scalar>> svd(effective, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VecX<Scalar>& sigma = svd.singularValues();
    const Scalar smallest = sigma(d - 1);
    const Scalar largest = sigma(0);
    if (!(smallest > Scalar(0)) ||
        (largest / smallest) * (largest / smallest) >= Scalar(zf_condition_limit_sq))
        throw RankDeficientError("zero_forcing: effective channel is rank deficient");

    return svd.matrixV() * sigma.cwiseInverse().asDiagonal() *
           svd.matrixU().adjoint();  // K x D
}

// Scale the precoder so its total transmit power equals power_budget exactly.
template <typename Scalar>
CMatX<Scalar> normalize_power(const CMatX<Scalar>& precoder, Scalar power_budget) {
    if (!(power_budget > Scalar(0)))
        throw std::invalid_argument("normalize_power: power budget must be positive");
    const Scalar norm_sq = precoder.squaredNorm();
    if (!(norm_sq > Scalar(0)))
        throw ZeroBeamformerError("normalize_power: zero precoder");
    return precoder * std::sqrt(power_budget / norm_sq);
}

} // namespace holouav
