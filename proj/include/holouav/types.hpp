#pragma once

#include <complex>

#include <Eigen/Core>

namespace holouav {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using CVecX = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using CMatX = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

template <typename Scalar>
inline constexpr Scalar pi_v = Scalar(3.141592653589793238462643383279502884L);

} // namespace holouav
