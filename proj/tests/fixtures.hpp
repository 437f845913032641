#pragma once

#include <random>

#include "holouav/metrics.hpp"
#include "holouav/rng.hpp"
#include "holouav/zf.hpp"

namespace holouav::testing {

inline std::mt19937_64 test_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

template <typename Scalar = double>
Scalar uniform(std::mt19937_64& engine, Scalar lo, Scalar hi) {
    return lo + (hi - lo) * Scalar(unit_double(engine));
}

template <typename Scalar = double>
Angles<Scalar> random_angles(std::mt19937_64& engine) {
    Angles<Scalar> a;
    a.elevation = uniform<Scalar>(engine, Scalar(0.05), Scalar(1.5));
    a.azimuth = uniform<Scalar>(engine, Scalar(-3.1), Scalar(3.1));
    return a;
}

// A complete random-but-feasible optimization state: users on the ground
// plane around the origin-offset UAV, amplitudes in [0,1], a random precoder
// scaled to the power budget.  The precoder is deliberately not the
// zero-forcing one so gradient tests probe generic points.
template <typename Scalar = double>
struct Fixture {
    Surface<Scalar> surface;
    UserLayout<Scalar> users;
    BeamformingState<Scalar> state;
    Scalar beta0;
    Scalar p_max;
};

template <typename Scalar = double>
Fixture<Scalar> random_fixture(std::mt19937_64& engine, Index elements_x, Index elements_y,
                               Index feeds, Index num_users, Scalar noise_power,
                               Scalar p_max = Scalar(1)) {
    Fixture<Scalar> fx;
    fx.surface = build_surface(make_surface_config<Scalar>(elements_x, elements_y, feeds));
    fx.beta0 = Scalar(1);
    fx.p_max = p_max;

    fx.users.positions.resize(num_users, 2);
    for (Index d = 0; d < num_users; ++d) {
        fx.users.positions(d, 0) = uniform<Scalar>(engine, Scalar(0), Scalar(100));
        fx.users.positions(d, 1) = uniform<Scalar>(engine, Scalar(0), Scalar(100));
    }

    const Vec3<Scalar> q(uniform<Scalar>(engine, Scalar(10), Scalar(90)),
                         uniform<Scalar>(engine, Scalar(10), Scalar(90)),
                         uniform<Scalar>(engine, Scalar(10), Scalar(50)));

    VecX<Scalar> w(fx.surface.num_elements());
    for (Index i = 0; i < w.size(); ++i)
        w(i) = uniform<Scalar>(engine, Scalar(0.05), Scalar(0.95));

    CMatX<Scalar> v(feeds, num_users);
    for (Index k = 0; k < feeds; ++k)
        for (Index d = 0; d < num_users; ++d)
            v(k, d) = Complex<Scalar>(uniform<Scalar>(engine, Scalar(-1), Scalar(1)),
                                      uniform<Scalar>(engine, Scalar(-1), Scalar(1)));
    v = normalize_power(v, p_max);

    fx.state = make_state(q, std::move(w), phase_matrix(fx.surface), std::move(v), noise_power,
                          channel(q, fx.users, fx.surface, fx.beta0));
    return fx;
}

// Component-wise gradient comparison: relative where the reference is above
// `floor`, absolute (against abs_tol) below it.  Reports the worst relative
// error seen through `worst_rel` when given.
template <typename Scalar>
bool gradient_matches(const VecX<Scalar>& got, const VecX<Scalar>& want, Scalar rel_tol,
                      Scalar floor, Scalar abs_tol, Scalar* worst_rel = nullptr) {
    using std::abs;
    bool ok = got.size() == want.size();
    for (Index i = 0; ok && i < got.size(); ++i) {
        const Scalar diff = abs(got(i) - want(i));
        if (abs(want(i)) < floor) {
            ok = diff <= abs_tol;
        } else {
            const Scalar rel = diff / abs(want(i));
            if (worst_rel != nullptr && rel > *worst_rel)
                *worst_rel = rel;
            ok = rel <= rel_tol;
        }
    }
    return ok;
}

} // namespace holouav::testing
