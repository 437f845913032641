#pragma once

#include <cmath>
#include <stdexcept>

#include "holouav/types.hpp"

namespace holouav {

// Default carrier setup: 30 GHz (lambda = 0.01 m with c = 3e8 m/s), element
// spacing lambda/3, in-surface wavenumber sqrt(eps_r) * k_f with eps_r = 3.
template <typename Scalar>
inline constexpr Scalar default_wavelength_v = Scalar(0.01L);
template <typename Scalar>
inline constexpr Scalar default_free_space_wavenumber_v = Scalar(200.0L) * pi_v<Scalar>;

template <typename Scalar>
inline Scalar default_surface_wavenumber() {
    return std::sqrt(Scalar(3)) * default_free_space_wavenumber_v<Scalar>;
}

// Geometry of the reconfigurable surface: a rectangular element grid fed by a
// row of feeds, one feed per RF chain.
template <typename Scalar>
struct SurfaceConfig {
    Index elements_x = 10;  // grid size along x
    Index elements_y = 10;  // grid size along y
    Scalar spacing_x = default_wavelength_v<Scalar> / Scalar(3);  // meters
    Scalar spacing_y = default_wavelength_v<Scalar> / Scalar(3);  // meters
    Scalar free_space_wavenumber = default_free_space_wavenumber_v<Scalar>;  // rad/m
    Scalar surface_wavenumber = default_surface_wavenumber<Scalar>();        // rad/m
    Index num_feeds = 6;

    Index num_elements() const { return elements_x * elements_y; }
};

template <typename Scalar>
SurfaceConfig<Scalar> make_surface_config(Index elements_x, Index elements_y, Index num_feeds) {
    SurfaceConfig<Scalar> cfg;
    cfg.elements_x = elements_x;
    cfg.elements_y = elements_y;
    cfg.num_feeds = num_feeds;
    return cfg;
}

template <typename Scalar>
void validate(const SurfaceConfig<Scalar>& cfg) {
    if (cfg.elements_x < 1 || cfg.elements_y < 1)
        throw std::invalid_argument("surface: element grid must be at least 1x1");
    if (!(cfg.spacing_x > Scalar(0)) || !(cfg.spacing_y > Scalar(0)))
        throw std::invalid_argument("surface: element spacing must be positive");
    if (!(cfg.free_space_wavenumber > Scalar(0)) || !(cfg.surface_wavenumber > Scalar(0)))
        throw std::invalid_argument("surface: wavenumbers must be positive");
    if (cfg.num_feeds < 1)
        throw std::invalid_argument("surface: need at least one feed");
}

// Realized geometry in the surface-local frame. Element m = iy*elements_x + ix
// sits at (ix*spacing_x, iy*spacing_y); this row-major order matches the
// Kronecker factorization used by the steering vector.
template <typename Scalar>
struct Surface {
    SurfaceConfig<Scalar> config;
    MatX<Scalar> element_positions;  // M x 2
    MatX<Scalar> feed_positions;     // K x 2

    Index num_elements() const { return element_positions.rows(); }
    Index num_feeds() const { return feed_positions.rows(); }
};

// Lays out the element grid and places the feeds uniformly along the x-edge
// (y = 0), spanning [0, (elements_x-1)*spacing_x]. A single feed sits at the
// edge midpoint.
template <typename Scalar>
Surface<Scalar> build_surface(const SurfaceConfig<Scalar>& cfg) {
    validate(cfg);
    Surface<Scalar> s;
    s.config = cfg;

    const Index m = cfg.num_elements();
    s.element_positions.resize(m, 2);
    for (Index iy = 0; iy < cfg.elements_y; ++iy)
        for (Index ix = 0; ix < cfg.elements_x; ++ix) {
            const Index idx = iy * cfg.elements_x + ix;
            s.element_positions(idx, 0) = Scalar(ix) * cfg.spacing_x;
            s.element_positions(idx, 1) = Scalar(iy) * cfg.spacing_y;
        }

    const Scalar edge = Scalar(cfg.elements_x - 1) * cfg.spacing_x;
    s.feed_positions.resize(cfg.num_feeds, 2);
    if (cfg.num_feeds == 1) {
        s.feed_positions(0, 0) = edge / Scalar(2);
        s.feed_positions(0, 1) = Scalar(0);
    } else {
        for (Index k = 0; k < cfg.num_feeds; ++k) {
            s.feed_positions(k, 0) = edge * Scalar(k) / Scalar(cfg.num_feeds - 1);
            s.feed_positions(k, 1) = Scalar(0);
        }
    }
    return s;
}

template <typename Scalar>
using PhaseMatrix = CMatX<Scalar>;

// Fixed reference-wave phases, entry (m, k) = exp(-i * k_s * |r_m - f_k|)
// for element position r_m and feed position f_k. Unit modulus by construction.
template <typename Scalar>
PhaseMatrix<Scalar> phase_matrix(const Surface<Scalar>& surface) {
    const Index m = surface.num_elements();
    const Index k = surface.num_feeds();
    PhaseMatrix<Scalar> phi(m, k);
    for (Index j = 0; j < k; ++j) {
        const Vec2<Scalar> feed = surface.feed_positions.row(j).transpose();
        for (Index i = 0; i < m; ++i) {
            const Vec2<Scalar> elem = surface.element_positions.row(i).transpose();
            const Scalar dist = (elem - feed).norm();
            const Scalar phase = -surface.config.surface_wavenumber * dist;
            phi(i, j) = Complex<Scalar>(std::cos(phase), std::sin(phase));
        }
    }
    return phi;
}

} // namespace holouav
