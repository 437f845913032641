#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "holouav/channel.hpp"
#include "holouav/position_opt.hpp"
#include "holouav/rng.hpp"
#include "holouav/surface.hpp"
#include "holouav/types.hpp"

namespace holouav {

// Physical setup of one experiment: surface geometry, user count and
// placement area, UAV start and flight region, power budget, and the seeds
// that make a realization reproducible.
struct Scenario {
    Index num_users = 2;
    double user_x_min = 0.0, user_x_max = 100.0;
    double user_y_min = 0.0, user_y_max = 100.0;
    SurfaceConfig<double> surface = make_surface_config<double>(10, 10, 6);
    Vec3<double> q0 = Vec3<double>(50.0, 50.0, 40.0);
    Region region = Region::rectangle(0.0, 100.0, 0.0, 100.0, 10.0, 50.0);
    double p_max = 1.0;   // watts
    double snr_db = 30.0; // sets the noise power relative to p_max
    double beta0 = 1.0;   // channel gain at 1 m
    std::uint64_t master_seed = 1;
    std::uint64_t realization = 0;

    double noise_power() const { return p_max / std::pow(10.0, snr_db / 10.0); }
};

inline void validate(const Scenario& sc) {
    validate(sc.surface);
    validate(sc.region);
    if (sc.num_users < 1)
        throw std::invalid_argument("scenario: need at least one user");
    if (sc.num_users > sc.surface.num_feeds)
        throw std::invalid_argument("scenario: more users than feeds");
    if (!(sc.user_x_min <= sc.user_x_max) || !(sc.user_y_min <= sc.user_y_max))
        throw std::invalid_argument("scenario: user area bounds out of order");
    if (!std::isfinite(sc.snr_db))
        throw std::invalid_argument("scenario: snr must be finite");
    if (!(sc.p_max >= 0.0))
        throw std::invalid_argument("scenario: power budget must be non-negative");
    if (!(sc.beta0 > 0.0))
        throw std::invalid_argument("scenario: reference gain must be positive");
    if (!sc.region.contains(sc.q0))
        throw std::invalid_argument("scenario: initial position outside flight region");
}

// Uniform user drop over the placement area, keyed by (master seed,
// realization).  Draw order is x then y per user so layouts are stable.
inline UserLayout<double> place_users(const Scenario& sc, std::uint64_t realization) {
    std::mt19937_64 engine = make_stream(sc.master_seed, realization, stream_user_placement);
    UserLayout<double> layout;
    layout.positions.resize(sc.num_users, 2);
    for (Index d = 0; d < sc.num_users; ++d) {
        layout.positions(d, 0) = sc.user_x_min + (sc.user_x_max - sc.user_x_min) * unit_double(engine);
        layout.positions(d, 1) = sc.user_y_min + (sc.user_y_max - sc.user_y_min) * unit_double(engine);
    }
    return layout;
}

} // namespace holouav
