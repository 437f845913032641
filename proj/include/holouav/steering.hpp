#pragma once

#include <cmath>

#include "holouav/surface.hpp"
#include "holouav/types.hpp"

namespace holouav {

// Elevation/azimuth of a UAV-to-user link. Elevation is measured from the
// ground plane (pi/2 = straight down from the UAV's point of view), azimuth in
// (-pi, pi].
template <typename Scalar>
struct Angles {
    Scalar elevation = Scalar(0);  // [0, pi/2]
    Scalar azimuth = Scalar(0);    // (-pi, pi]
};

enum class Axis { X, Y };

namespace detail {

// Directional cosine along one grid axis: sin(el)*cos(az) for x, sin(el)*sin(az) for y.
template <typename Scalar>
Scalar direction_cosine(const Angles<Scalar>& angles, Axis axis) {
    const Scalar s = std::sin(angles.elevation);
    return axis == Axis::X ? s * std::cos(angles.azimuth) : s * std::sin(angles.azimuth);
}

} // namespace detail

// Axis response vector: entry p = exp(i * p * k_f * spacing * psi), p = 0..n-1.
template <typename Scalar>
CVecX<Scalar> steering_axis(const Angles<Scalar>& angles, Index n, Scalar spacing,
                            Scalar free_space_wavenumber, Axis axis) {
    const Scalar psi = detail::direction_cosine(angles, axis);
    const Scalar phase_step = free_space_wavenumber * spacing * psi;
    CVecX<Scalar> a(n);
    for (Index p = 0; p < n; ++p) {
        const Scalar ph = Scalar(p) * phase_step;
        a(p) = Complex<Scalar>(std::cos(ph), std::sin(ph));
    }
    return a;
}

// Planar array response a = a_y (x) a_x (Kronecker product); the entry for
// element m = iy*elements_x + ix is a_y[iy] * a_x[ix].
template <typename Scalar>
CVecX<Scalar> steering(const Angles<Scalar>& angles, const Surface<Scalar>& surface) {
    const auto& cfg = surface.config;
    const CVecX<Scalar> ax =
        steering_axis(angles, cfg.elements_x, cfg.spacing_x, cfg.free_space_wavenumber, Axis::X);
    const CVecX<Scalar> ay =
        steering_axis(angles, cfg.elements_y, cfg.spacing_y, cfg.free_space_wavenumber, Axis::Y);
    CVecX<Scalar> a(cfg.num_elements());
    for (Index iy = 0; iy < cfg.elements_y; ++iy)
        a.segment(iy * cfg.elements_x, cfg.elements_x) = ay(iy) * ax;
    return a;
}

namespace detail {

// d/d(angle) of an axis response: i * k_f * spacing * (trig factor) * [0..n-1] ⊙ a_axis.
// The trig factor is the angle-derivative of the directional cosine.
template <typename Scalar>
CVecX<Scalar> steering_axis_derivative(const Angles<Scalar>& angles, Index n, Scalar spacing,
                                       Scalar free_space_wavenumber, Axis axis,
                                       bool wrt_elevation) {
    Scalar trig;
    if (wrt_elevation) {
        trig = std::cos(angles.elevation) *
               (axis == Axis::X ? std::cos(angles.azimuth) : std::sin(angles.azimuth));
    } else {
        trig = std::sin(angles.elevation) *
               (axis == Axis::X ? -std::sin(angles.azimuth) : std::cos(angles.azimuth));
    }
    const CVecX<Scalar> a = steering_axis(angles, n, spacing, free_space_wavenumber, axis);
    const Complex<Scalar> factor(Scalar(0), free_space_wavenumber * spacing * trig);
    CVecX<Scalar> d(n);
    for (Index p = 0; p < n; ++p)
        d(p) = factor * Scalar(p) * a(p);
    return d;
}

} // namespace detail

// M x 2 Jacobian of the steering vector; column 0 = d a/d elevation,
// column 1 = d a/d azimuth, assembled with the product rule on the Kronecker
// factors.
template <typename Scalar>
CMatX<Scalar> steering_jacobian(const Angles<Scalar>& angles, const Surface<Scalar>& surface) {
    const auto& cfg = surface.config;
    const Scalar kf = cfg.free_space_wavenumber;
    const CVecX<Scalar> ax = steering_axis(angles, cfg.elements_x, cfg.spacing_x, kf, Axis::X);
    const CVecX<Scalar> ay = steering_axis(angles, cfg.elements_y, cfg.spacing_y, kf, Axis::Y);

    const CVecX<Scalar> dax_el =
        detail::steering_axis_derivative(angles, cfg.elements_x, cfg.spacing_x, kf, Axis::X, true);
    const CVecX<Scalar> day_el =
        detail::steering_axis_derivative(angles, cfg.elements_y, cfg.spacing_y, kf, Axis::Y, true);
    const CVecX<Scalar> dax_az =
        detail::steering_axis_derivative(angles, cfg.elements_x, cfg.spacing_x, kf, Axis::X, false);
    const CVecX<Scalar> day_az =
        detail::steering_axis_derivative(angles, cfg.elements_y, cfg.spacing_y, kf, Axis::Y, false);

    CMatX<Scalar> jac(cfg.num_elements(), 2);
    for (Index iy = 0; iy < cfg.elements_y; ++iy) {
        const Index off = iy * cfg.elements_x;
        jac.col(0).segment(off, cfg.elements_x) = ay(iy) * dax_el + day_el(iy) * ax;
        jac.col(1).segment(off, cfg.elements_x) = ay(iy) * dax_az + day_az(iy) * ax;
    }
    return jac;
}

} // namespace holouav
