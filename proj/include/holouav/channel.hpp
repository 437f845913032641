#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "holouav/errors.hpp"
#include "holouav/steering.hpp"
#include "holouav/surface.hpp"
#include "holouav/types.hpp"

namespace holouav {

// Ground users on the z = 0 plane.
template <typename Scalar>
struct UserLayout {
    MatX<Scalar> positions;  // D x 2, meters

    Index num_users() const { return positions.rows(); }
};

// Below this horizontal distance the azimuth (and its gradient) is treated as
// undefined rather than perturbed; sanctioned scenarios keep the UAV at
// altitude >= 10 m so this only fires on misconfiguration.
inline constexpr double min_horizontal_distance = 1e-9;

// Line-of-sight channels for all users at one UAV position, with the
// per-user amplitude gain sqrt(beta0)/distance and link angles cached.
template <typename Scalar>
struct ChannelSet {
    CMatX<Scalar> vectors;               // M x D, column d = channel to user d
    VecX<Scalar> gains;                  // D
    std::vector<Angles<Scalar>> angles;  // D

    Index num_users() const { return vectors.cols(); }
};

namespace detail {

template <typename Scalar>
Vec3<Scalar> offset_to_user(const Vec3<Scalar>& q, const Vec2<Scalar>& user) {
    return Vec3<Scalar>(q.x() - user.x(), q.y() - user.y(), q.z());
}

} // namespace detail

// Link geometry: elevation = arctan(altitude / horizontal distance), azimuth =
// atan2 of the horizontal offset. Directly overhead (zero horizontal distance)
// maps to elevation pi/2, azimuth 0 by convention.
template <typename Scalar>
Angles<Scalar> angles_to_user(const Vec3<Scalar>& q, const Vec2<Scalar>& user) {
    const Vec3<Scalar> diff = detail::offset_to_user(q, user);
    if (diff.norm() == Scalar(0))
        throw SingularGeometryError("angles_to_user: UAV coincides with user");
    const Scalar rho = diff.template head<2>().norm();
    Angles<Scalar> a;
    if (rho == Scalar(0)) {
        a.elevation = pi_v<Scalar> / Scalar(2);
        a.azimuth = Scalar(0);
        return a;
    }
    a.elevation = std::atan(diff.z() / rho);
    a.azimuth = std::atan2(diff.y(), diff.x());
    if (a.azimuth == -pi_v<Scalar>)
        a.azimuth = pi_v<Scalar>;  // keep azimuth in (-pi, pi]
    return a;
}

template <typename Scalar>
ChannelSet<Scalar> channel(const Vec3<Scalar>& q, const UserLayout<Scalar>& users,
                           const Surface<Scalar>& surface, Scalar reference_gain) {
    const Index d = users.num_users();
    ChannelSet<Scalar> set;
    set.vectors.resize(surface.num_elements(), d);
    set.gains.resize(d);
    set.angles.resize(d);
    for (Index i = 0; i < d; ++i) {
        const Vec2<Scalar> user = users.positions.row(i).transpose();
        const Scalar dist = detail::offset_to_user(q, user).norm();
        set.angles[i] = angles_to_user(q, user);
        set.gains(i) = std::sqrt(reference_gain) / dist;
        set.vectors.col(i) = set.gains(i) * steering(set.angles[i], surface);
    }
    return set;
}

// Exact gradients of the link angles with respect to the UAV position:
//   grad(elevation) = [-sin(el)cos(az), -sin(el)sin(az), cos(el)] / r
//   grad(azimuth)   = [-sin(az), cos(az), 0] / rho
// with r the 3D distance and rho the horizontal distance.
template <typename Scalar>
std::pair<Vec3<Scalar>, Vec3<Scalar>> grad_angles(const Vec3<Scalar>& q, const Vec2<Scalar>& user) {
    const Vec3<Scalar> diff = detail::offset_to_user(q, user);
    const Scalar rho = diff.template head<2>().norm();
    if (rho < Scalar(min_horizontal_distance))
        throw SingularGeometryError("grad_angles: UAV on the vertical through the user");
    const Scalar r = diff.norm();
    const Angles<Scalar> a = angles_to_user(q, user);
    const Scalar se = std::sin(a.elevation), ce = std::cos(a.elevation);
    const Scalar sa = std::sin(a.azimuth), ca = std::cos(a.azimuth);
    Vec3<Scalar> grad_el(-se * ca / r, -se * sa / r, ce / r);
    Vec3<Scalar> grad_az(-sa / rho, ca / rho, Scalar(0));
    return {grad_el, grad_az};
}

// M x 3 gradient of the channel vector, column c = d h / d q_c. Sum of the
// path-loss variation (outer product of the steering vector with the gradient
// of sqrt(beta0)/r) and the steering variation (angle Jacobian chained through
// the angle gradients).
template <typename Scalar>
CMatX<Scalar> grad_channel(const Vec3<Scalar>& q, const Vec2<Scalar>& user,
                           const Surface<Scalar>& surface, Scalar reference_gain) {
    const auto [grad_el, grad_az] = grad_angles(q, user);
    const Vec3<Scalar> diff = detail::offset_to_user(q, user);
    const Scalar r = diff.norm();
    const Angles<Scalar> a = angles_to_user(q, user);
    const Scalar amp = std::sqrt(reference_gain);

    const CVecX<Scalar> steer = steering(a, surface);
    const CMatX<Scalar> jac = steering_jacobian(a, surface);  // M x 2

    const Vec3<Scalar> gain_grad = -(amp / (r * r * r)) * diff;
    MatX<Scalar> angle_grads(2, 3);
    angle_grads.row(0) = grad_el.transpose();
    angle_grads.row(1) = grad_az.transpose();

    CMatX<Scalar> grad = steer * gain_grad.transpose().template cast<Complex<Scalar>>();
    grad.noalias() += (amp / r) * jac * angle_grads.template cast<Complex<Scalar>>();
    return grad;
}

} // namespace holouav
