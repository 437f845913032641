#include <doctest.h>

#include <cmath>

#include "holouav/alt_opt.hpp"
#include "holouav/errors.hpp"
#include "holouav/fd.hpp"
#include "holouav/holo_opt.hpp"
#include "holouav/position_opt.hpp"
#include "holouav/scenario.hpp"
#include "holouav/zf.hpp"

#include "fixtures.hpp"

using namespace holouav;
using holouav::testing::Fixture;
using holouav::testing::gradient_matches;
using holouav::testing::random_fixture;
using holouav::testing::test_rng;
using holouav::testing::uniform;

namespace {

// Sum rate as a function of the amplitude vector at fixed position/precoder.
template <typename Scalar>
Scalar rate_of_weights(const BeamformingState<Scalar>& st, const VecX<Scalar>& w) {
    BeamformingState<Scalar> probe = st;
    probe.weights = w;
    return sum_rate(probe);
}

// Sum rate as a function of the UAV position, channels re-derived per probe.
template <typename Scalar>
Scalar rate_of_position(const Fixture<Scalar>& fx, const Vec3<Scalar>& q) {
    BeamformingState<Scalar> probe = fx.state;
    probe.uav_position = q;
    probe.channels = channel(q, fx.users, fx.surface, fx.beta0);
    return sum_rate(probe);
}

Scenario small_scenario() {
    Scenario sc;
    sc.surface = make_surface_config<double>(8, 8, 6);
    return sc;
}

} // namespace

TEST_CASE("gain decomposition reproduces the pair gains") {
    auto engine = test_rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        auto fx = random_fixture(engine, 3, 2, 3, 3, 1e-3);
        const auto& st = fx.state;
        const HoloGradientWorkspace<double> ws = decompose(st);
        const CMatX<double> b =
            st.channels.vectors.adjoint() * holographic_matrix(st.weights, st.phase) * st.precoder;
        for (Index d = 0; d < 3; ++d) {
            CHECK(std::abs(ws.u(d) - b(d, d)) <= 1e-12 * std::max(1.0, std::abs(b(d, d))));
            for (Index k = 0; k < 3; ++k) {
                if (k == d)
                    continue;
                CHECK(std::abs(ws.u_cross(d, k) - b(d, k)) <=
                      1e-12 * std::max(1.0, std::abs(b(d, k))));
            }
        }
        CHECK(detail::sum_rate_from(ws, st.noise_power) ==
              doctest::Approx(sum_rate(st)).epsilon(1e-12));
    }
}

TEST_CASE("per-element factors multiply out the channel and fed wave") {
    auto engine = test_rng(103);
    auto fx = random_fixture(engine, 2, 2, 2, 2, 1e-3);
    const auto& st = fx.state;
    const HoloGradientWorkspace<double> ws = decompose(st);
    const CMatX<double> phase_v = st.phase * st.precoder;
    for (Index d = 0; d < 2; ++d)
        for (Index m = 0; m < 4; ++m) {
            const Complex<double> want = std::conj(st.channels.vectors(m, d)) * phase_v(m, d);
            CHECK(std::abs(ws.per_element_signal(d, m) - want) < 1e-15);
            for (Index k = 0; k < 2; ++k) {
                const Complex<double> cross =
                    std::conj(st.channels.vectors(m, d)) * phase_v(m, k);
                CHECK(std::abs(ws.per_element_interf[std::size_t(d)](k, m) - cross) < 1e-15);
            }
        }
}

TEST_CASE("refreshing the workspace equals a fresh decomposition") {
    auto engine = test_rng(107);
    auto fx = random_fixture(engine, 3, 3, 2, 2, 1e-3);
    HoloGradientWorkspace<double> ws = decompose(fx.state);
    VecX<double> w_new(9);
    for (Index i = 0; i < 9; ++i)
        w_new(i) = uniform(engine, 0.0, 1.0);
    refresh(ws, w_new);
    auto st2 = fx.state;
    st2.weights = w_new;
    const HoloGradientWorkspace<double> ws2 = decompose(st2);
    CHECK((ws.u - ws2.u).norm() < 1e-14);
    CHECK((ws.u_cross - ws2.u_cross).norm() < 1e-14);
}

TEST_CASE("amplitude gradient vanishes with a zero precoder") {
    auto engine = test_rng(109);
    auto fx = random_fixture(engine, 2, 3, 2, 2, 1e-3);
    fx.state.precoder.setZero();
    CHECK(grad_weights(fx.state).norm() == 0.0);
}

TEST_CASE("all-zero amplitudes are a stationary point of the rate") {
    auto engine = test_rng(113);
    auto fx = random_fixture(engine, 3, 2, 3, 2, 1e-3);
    fx.state.weights.setZero();
    CHECK(grad_weights(fx.state).norm() == 0.0);
}

TEST_CASE("single-element amplitude gradient matches the closed form") {
    auto engine = test_rng(127);
    for (int trial = 0; trial < 10; ++trial) {
        auto fx = random_fixture(engine, 1, 1, 1, 1, 1e-2);
        const auto& st = fx.state;
        const Complex<double> c0 =
            std::conj(st.channels.vectors(0, 0)) * st.phase(0, 0) * st.precoder(0, 0);
        const double c = std::norm(c0);
        const double w = st.weights(0);
        const double want = (2.0 * w * c / (1e-2 + w * w * c)) / std::log(2.0);
        const VecX<double> g = grad_weights(st);
        REQUIRE(g.size() == 1);
        CHECK(g(0) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("amplitude gradient matches central differences") {
    auto engine = test_rng(131);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        auto fx = random_fixture(engine, 3, 3, 3, 2, uniform(engine, 1e-3, 1e-1));
        const auto& st = fx.state;
        const VecX<double> g = grad_weights(st);
        const VecX<double> g_fd = fd_grad(
            [&](const VecX<double>& w) { return rate_of_weights(st, w); }, st.weights);
        CHECK(gradient_matches(g, g_fd, 1e-5, 1e-12, 1e-9, &worst));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("amplitude gradient survives an extended-precision difference check") {
    auto engine = test_rng(137);
    for (int trial = 0; trial < 5; ++trial) {
        auto fx = random_fixture<long double>(engine, 3, 2, 3, 2, 1e-3L);
        const auto& st = fx.state;
        const VecX<long double> g = grad_weights(st);
        FdConfig cfg{1e-7};
        const VecX<long double> g_fd = fd_grad(
            [&](const VecX<long double>& w) { return rate_of_weights(st, w); }, st.weights, cfg);
        long double worst = 0.0L;
        CHECK(gradient_matches(g, g_fd, 1e-8L, 1e-12L, 1e-11L, &worst));
    }
}

TEST_CASE("convenience gradient overload agrees with the workspace form") {
    auto engine = test_rng(139);
    auto fx = random_fixture(engine, 3, 3, 2, 2, 1e-3);
    const HoloGradientWorkspace<double> ws = decompose(fx.state);
    const VecX<double> a = grad_weights(ws, fx.state.noise_power);
    const VecX<double> b = grad_weights(fx.state);
    CHECK((a - b).norm() == 0.0);
}

TEST_CASE("amplitude projection clips to the unit box") {
    VecX<double> w(4);
    w << -0.5, 0.25, 1.0, 1.7;
    const VecX<double> p = project_weights(w);
    CHECK(p(0) == 0.0);
    CHECK(p(1) == 0.25);
    CHECK(p(2) == 1.0);
    CHECK(p(3) == 1.0);
    CHECK((project_weights(p) - p).norm() == 0.0);
}

TEST_CASE("amplitude ascent is monotone and bounded") {
    auto engine = test_rng(149);
    for (int trial = 0; trial < 10; ++trial) {
        auto fx = random_fixture(engine, 3, 3, 3, 2, 1e-3);
        const HoloResult<double> res = optimize_weights(fx.state, HoloOptConfig{});
        REQUIRE(!res.trace.empty());
        CHECK(res.trace.front() == doctest::Approx(sum_rate(fx.state)).epsilon(1e-12));
        for (std::size_t i = 1; i < res.trace.size(); ++i)
            CHECK(res.trace[i] >= res.trace[i - 1] - 1e-11);
        CHECK(res.weights.minCoeff() >= 0.0);
        CHECK(res.weights.maxCoeff() <= 1.0);
        CHECK(res.iterations >= 1);
        CHECK(res.iterations <= 500);
    }
}

TEST_CASE("single-element ascent saturates the amplitude") {
    auto engine = test_rng(151);
    auto fx = random_fixture(engine, 1, 1, 1, 1, 1e-4);
    fx.state.weights(0) = 0.3;
    const HoloResult<double> res = optimize_weights(fx.state, HoloOptConfig{});
    CHECK(res.weights(0) == 1.0);
    const double c = std::norm(std::conj(fx.state.channels.vectors(0, 0)) * fx.state.phase(0, 0) *
                               fx.state.precoder(0, 0));
    CHECK(res.trace.back() == doctest::Approx(std::log2(1.0 + c / 1e-4)).epsilon(1e-12));
}

TEST_CASE("a zero precoder stops the ascent after one pass") {
    auto engine = test_rng(157);
    auto fx = random_fixture(engine, 2, 2, 2, 2, 1e-3);
    fx.state.precoder.setZero();
    const HoloResult<double> res = optimize_weights(fx.state, HoloOptConfig{});
    CHECK(res.iterations == 1);
    CHECK((res.weights - fx.state.weights).norm() == 0.0);
    CHECK(res.trace.front() == 0.0);
    CHECK(res.trace.back() == 0.0);
}

TEST_CASE("an oversized step triggers the backtracking guard yet stays monotone") {
    auto engine = test_rng(163);
    auto fx = random_fixture(engine, 3, 3, 3, 2, 1e-4);
    // Start from exact interference nulls: any large amplitude move leaks
    // interference well above the noise floor, so a huge step must backtrack.
    fx.state.precoder = normalize_power(
        zero_forcing(effective_channel(fx.state.channels, fx.state.weights, fx.state.phase)),
        fx.p_max);
    HoloOptConfig cfg;
    cfg.eta = 50.0;
    const HoloResult<double> res = optimize_weights(fx.state, cfg);
    CHECK(res.guard_events >= 1);
    for (std::size_t i = 1; i < res.trace.size(); ++i)
        CHECK(res.trace[i] >= res.trace[i - 1] - 1e-11);
}

TEST_CASE("out-of-range starting amplitudes are projected before the first step") {
    auto engine = test_rng(167);
    auto fx = random_fixture(engine, 2, 2, 2, 2, 1e-3);
    fx.state.weights(0) = -2.0;
    fx.state.weights(3) = 3.0;
    const HoloResult<double> res = optimize_weights(fx.state, HoloOptConfig{});
    auto projected = fx.state;
    projected.weights = project_weights(fx.state.weights);
    CHECK(res.trace.front() == doctest::Approx(sum_rate(projected)).epsilon(1e-12));
    CHECK(res.weights.minCoeff() >= 0.0);
    CHECK(res.weights.maxCoeff() <= 1.0);
}

TEST_CASE("weight-delta convergence mode also terminates cleanly") {
    auto engine = test_rng(173);
    auto fx = random_fixture(engine, 3, 2, 3, 2, 1e-3);
    HoloOptConfig cfg;
    cfg.use_weight_delta = true;
    const HoloResult<double> res = optimize_weights(fx.state, cfg);
    CHECK(res.iterations <= cfg.max_iters);
    CHECK(res.weights.minCoeff() >= 0.0);
    CHECK(res.weights.maxCoeff() <= 1.0);
}

TEST_CASE("position gradient vanishes with zero amplitudes") {
    auto engine = test_rng(179);
    auto fx = random_fixture(engine, 3, 3, 2, 2, 1e-3);
    fx.state.weights.setZero();
    CHECK(grad_position(fx.state, fx.users, fx.surface, fx.beta0).norm() == 0.0);
}

TEST_CASE("a lone user pulls the position gradient straight toward it") {
    auto engine = test_rng(181);
    for (int trial = 0; trial < 10; ++trial) {
        auto fx = random_fixture(engine, 1, 1, 1, 1, 1e-3);
        const Vec3<double> g = grad_position(fx.state, fx.users, fx.surface, fx.beta0);
        const Vec3<double> diff(fx.state.uav_position.x() - fx.users.positions(0, 0),
                                fx.state.uav_position.y() - fx.users.positions(0, 1),
                                fx.state.uav_position.z());
        const double cosine = g.dot(diff) / (g.norm() * diff.norm());
        CHECK(cosine == doctest::Approx(-1.0).epsilon(1e-10));
    }
}

TEST_CASE("position gradient matches central differences") {
    auto engine = test_rng(191);
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
        auto fx = random_fixture(engine, 3, 3, 3, 2, uniform(engine, 1e-3, 1e-1));
        const Vec3<double> g = grad_position(fx.state, fx.users, fx.surface, fx.beta0);
        FdConfig cfg{1e-5};
        const VecX<double> g_fd = fd_grad(
            [&](const VecX<double>& q) { return rate_of_position(fx, Vec3<double>(q)); },
            VecX<double>(fx.state.uav_position), cfg);
        CHECK(gradient_matches(VecX<double>(g), g_fd, 1e-5, 1e-12, 1e-9, &worst));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("flight volumes validate their bounds") {
    CHECK_NOTHROW(validate(Region::rectangle(0, 100, 0, 100, 10, 50)));
    CHECK_NOTHROW(validate(Region::circle(Vec2<double>(50, 50), 10, 10, 50)));
    CHECK_THROWS_AS(validate(Region::rectangle(10, 0, 0, 100, 10, 50)), std::invalid_argument);
    CHECK_THROWS_AS(validate(Region::rectangle(0, 100, 0, 100, 50, 10)), std::invalid_argument);
    CHECK_THROWS_AS(validate(Region::circle(Vec2<double>(0, 0), 0.0, 10, 50)),
                    std::invalid_argument);
}

TEST_CASE("containment respects the tolerance") {
    const Region rect = Region::rectangle(0, 100, 0, 100, 10, 50);
    CHECK(rect.contains(Vec3<double>(50, 50, 30)));
    CHECK(!rect.contains(Vec3<double>(-0.1, 50, 30)));
    CHECK(rect.contains(Vec3<double>(-0.1, 50, 30), 0.2));
    CHECK(!rect.contains(Vec3<double>(50, 50, 9.0)));

    const Region disk = Region::circle(Vec2<double>(50, 50), 10, 10, 50);
    CHECK(disk.contains(Vec3<double>(59, 50, 30)));
    CHECK(!disk.contains(Vec3<double>(61, 50, 30)));
    CHECK(disk.contains(Vec3<double>(61, 50, 30), 1.5));
}

TEST_CASE("projection leaves interior points alone") {
    const Region rect = Region::rectangle(0, 100, 0, 100, 10, 50);
    const Vec3<double> q(12.5, 77.1, 33.0);
    CHECK((project_position(q, rect) - q).norm() == 0.0);
}

TEST_CASE("projection retracts radially onto a disk") {
    const Region disk = Region::circle(Vec2<double>(50, 50), 10, 10, 50);
    const Vec3<double> p = project_position(Vec3<double>(70, 50, 30), disk);
    CHECK(p.x() == doctest::Approx(60.0).epsilon(1e-14));
    CHECK(p.y() == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(p.z() == 30.0);
}

TEST_CASE("projection clamps the altitude") {
    const Region rect = Region::rectangle(0, 100, 0, 100, 10, 50);
    CHECK(project_position(Vec3<double>(50, 50, 60), rect).z() == 50.0);
    CHECK(project_position(Vec3<double>(50, 50, 3), rect).z() == 10.0);
}

TEST_CASE("projection is idempotent and non-expansive") {
    auto engine = test_rng(193);
    const Region regions[2] = {Region::rectangle(0, 100, 0, 100, 10, 50),
                               Region::circle(Vec2<double>(50, 50), 25, 10, 50)};
    for (const Region& region : regions) {
        for (int trial = 0; trial < 50; ++trial) {
            const Vec3<double> a(uniform(engine, -50.0, 150.0), uniform(engine, -50.0, 150.0),
                                 uniform(engine, -20.0, 80.0));
            const Vec3<double> b(uniform(engine, -50.0, 150.0), uniform(engine, -50.0, 150.0),
                                 uniform(engine, -20.0, 80.0));
            const Vec3<double> pa = project_position(a, region);
            const Vec3<double> pb = project_position(b, region);
            CHECK(region.contains(pa, 1e-12));
            // Radial retraction re-projects within rounding of itself.
            CHECK((project_position(pa, region) - pa).norm() <= 1e-13);
            CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);
        }
    }
}

TEST_CASE("an interior ascent step moves exactly the step length") {
    const Region rect = Region::rectangle(0, 100, 0, 100, 10, 50);
    PositionOptConfig cfg;
    const Vec3<double> q(10, 10, 30);
    const Vec3<double> moved = step_position(q, Vec3<double>(3, 4, 0), cfg, rect);
    CHECK((moved - q).norm() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(moved.x() == doctest::Approx(11.2).epsilon(1e-12));
    CHECK(moved.y() == doctest::Approx(11.6).epsilon(1e-12));
}

TEST_CASE("a zero gradient leaves the position in place") {
    const Region rect = Region::rectangle(0, 100, 0, 100, 10, 50);
    const Vec3<double> q(42, 17, 25);
    CHECK((step_position(q, Vec3<double>::Zero(), PositionOptConfig{}, rect) - q).norm() == 0.0);
}

TEST_CASE("steps near the ceiling are clipped back inside") {
    const Region rect = Region::rectangle(0, 100, 0, 100, 10, 50);
    const Vec3<double> moved =
        step_position(Vec3<double>(50, 50, 49.5), Vec3<double>(0, 0, 1), PositionOptConfig{}, rect);
    CHECK(moved.z() == 50.0);
    CHECK(moved.x() == 50.0);
}

TEST_CASE("unnormalized steps scale with the gradient magnitude") {
    const Region rect = Region::rectangle(0, 100, 0, 100, 10, 50);
    PositionOptConfig cfg;
    cfg.normalize_gradient = false;
    const Vec3<double> moved = step_position(Vec3<double>(10, 10, 30), Vec3<double>(3, 4, 0), cfg, rect);
    CHECK(moved.x() == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(moved.y() == doctest::Approx(18.0).epsilon(1e-14));
}

TEST_CASE("the driver is deterministic across repeat runs") {
    const Scenario sc = small_scenario();
    const UserLayout<double> users = place_users(sc, 0);
    const RunResult a = run(sc, users, DriverConfig{});
    const RunResult b = run(sc, users, DriverConfig{});
    CHECK(a.final_sum_rate == b.final_sum_rate);
    CHECK(a.outer_iters == b.outer_iters);
    CHECK((a.state.uav_position - b.state.uav_position).norm() == 0.0);
    CHECK((a.state.weights - b.state.weights).norm() == 0.0);
}

TEST_CASE("the driver converges on the stock scenario and improves the start") {
    const Scenario sc = small_scenario();
    const RunResult res = run(sc, DriverConfig{});
    CHECK(res.converged);
    CHECK(res.outer_iters <= 200);
    CHECK(res.final_sum_rate > res.trace.initial_sum_rate);
    CHECK(std::size_t(res.outer_iters) == res.trace.iterations.size());
    CHECK(res.trace.iterations.back().delta_r < 1e-4);
}

TEST_CASE("guarded outer iterations never lose rate") {
    const Scenario sc = small_scenario();
    const RunResult res = run(sc, DriverConfig{});
    double prev = res.trace.initial_sum_rate;
    for (const OuterIteration& it : res.trace.iterations) {
        CHECK(it.sum_rate >= prev - 1e-9);
        prev = it.sum_rate;
    }
}

TEST_CASE("every outer iterate stays feasible") {
    Scenario sc = small_scenario();
    sc.snr_db = 20.0;
    const RunResult res = run(sc, DriverConfig{});
    for (const OuterIteration& it : res.trace.iterations) {
        CHECK(it.weight_min >= 0.0);
        CHECK(it.weight_max <= 1.0);
        CHECK(std::abs(it.total_power - sc.p_max) <= 1e-9 * sc.p_max);
        CHECK(sc.region.contains(it.q, 1e-9));
    }
}

TEST_CASE("restarting at the converged point stops almost immediately") {
    const Scenario sc = small_scenario();
    const UserLayout<double> users = place_users(sc, 0);
    const RunResult first = run(sc, users, DriverConfig{});
    REQUIRE(first.converged);

    Scenario warm = sc;
    warm.q0 = first.state.uav_position;
    const RunResult again = run(warm, users, first.state.weights, DriverConfig{});
    CHECK(again.converged);
    CHECK(again.outer_iters <= 2);
    CHECK(again.final_sum_rate >= first.final_sum_rate - 1e-6);
}

TEST_CASE("a zero power budget is a fixed point with zero rate") {
    Scenario sc = small_scenario();
    sc.p_max = 0.0;
    const RunResult res = run(sc, DriverConfig{});
    CHECK(res.converged);
    CHECK(res.outer_iters == 1);
    CHECK(res.final_sum_rate == 0.0);
    CHECK(res.state.precoder.norm() == 0.0);
}

TEST_CASE("the benchmark keeps its amplitude draw untouched") {
    const Scenario sc = small_scenario();
    const UserLayout<double> users = place_users(sc, 0);
    const std::uint64_t seed = 42;
    const RunResult res = run_benchmark(sc, users, DriverConfig{}, seed);

    std::mt19937_64 engine = make_stream(seed, 0, stream_benchmark_weights);
    VecX<double> draw(sc.surface.num_elements());
    for (Index i = 0; i < draw.size(); ++i)
        draw(i) = unit_double(engine);
    CHECK((res.state.weights - draw).norm() == 0.0);

    for (const OuterIteration& it : res.trace.iterations) {
        CHECK(it.inner_holo_iters == 0);
        CHECK(it.weight_min == draw.minCoeff());
        CHECK(it.weight_max == draw.maxCoeff());
    }

    const RunResult repeat = run_benchmark(sc, users, DriverConfig{}, seed);
    CHECK(repeat.final_sum_rate == res.final_sum_rate);
}

TEST_CASE("amplitude optimization beats the untouched draw") {
    const Scenario sc = small_scenario();
    const UserLayout<double> users = place_users(sc, 0);
    const RunResult proposed = run(sc, users, DriverConfig{});
    const RunResult bench = run_benchmark(sc, users, DriverConfig{}, sc.master_seed);
    CHECK(proposed.final_sum_rate > bench.final_sum_rate);
}

TEST_CASE("coincident users make the precoder unrecoverable") {
    Scenario sc = small_scenario();
    UserLayout<double> users;
    users.positions.resize(2, 2);
    users.positions << 30.0, 30.0, 30.0, 30.0;
    CHECK_THROWS_WITH_AS(run(sc, users, DriverConfig{}),
                         "zero_forcing: effective channel is rank deficient (outer iteration 0)",
                         RankDeficientError);
}

TEST_CASE("user layouts must match the scenario") {
    const Scenario sc = small_scenario();
    UserLayout<double> users;
    users.positions.resize(3, 2);
    users.positions.setConstant(10.0);
    CHECK_THROWS_AS(run(sc, users, DriverConfig{}), std::invalid_argument);
}

TEST_CASE("explicit starting amplitudes are validated") {
    const Scenario sc = small_scenario();
    const UserLayout<double> users = place_users(sc, 0);
    VecX<double> wrong_size = VecX<double>::Constant(10, 0.5);
    CHECK_THROWS_AS(run(sc, users, wrong_size, DriverConfig{}), std::invalid_argument);
    VecX<double> out_of_range = VecX<double>::Constant(64, 0.5);
    out_of_range(5) = 1.5;
    CHECK_THROWS_AS(run(sc, users, out_of_range, DriverConfig{}), std::invalid_argument);
}

TEST_CASE("explicit starting amplitudes reproduce the stock initialization") {
    const Scenario sc = small_scenario();
    const UserLayout<double> users = place_users(sc, 0);
    const VecX<double> half = VecX<double>::Constant(64, 0.5);
    const RunResult implicit = run(sc, users, DriverConfig{});
    const RunResult explicit_start = run(sc, users, half, DriverConfig{});
    CHECK(implicit.final_sum_rate == explicit_start.final_sum_rate);
    CHECK((implicit.state.weights - explicit_start.state.weights).norm() == 0.0);
}

TEST_CASE("random amplitude initialization is reproducible and distinct") {
    const Scenario sc = small_scenario();
    const UserLayout<double> users = place_users(sc, 0);
    DriverConfig cfg;
    cfg.weight_init = DriverConfig::WeightInit::Random;
    const RunResult a = run(sc, users, cfg);
    const RunResult b = run(sc, users, cfg);
    CHECK(a.final_sum_rate == b.final_sum_rate);
    const RunResult half = run(sc, users, DriverConfig{});
    CHECK(a.trace.initial_sum_rate != half.trace.initial_sum_rate);
}

TEST_CASE("disabling the guards reverts to the raw update rules") {
    DriverConfig cfg = paper_faithful_config(DriverConfig{});
    CHECK(!cfg.guards);
    CHECK(!cfg.holo.monotone_guard);

    Scenario sc = small_scenario();
    sc.snr_db = 10.0;
    cfg.max_outer = 40;
    const RunResult res = run(sc, cfg);
    CHECK(res.outer_iters >= 1);
    for (const OuterIteration& it : res.trace.iterations)
        CHECK(sc.region.contains(it.q, 1e-9));
}

TEST_CASE("scenario validation rejects inconsistent setups") {
    Scenario sc;
    sc.num_users = 0;
    CHECK_THROWS_AS(validate(sc), std::invalid_argument);
    sc = Scenario{};
    sc.num_users = 7; // one more than the stock feed count
    CHECK_THROWS_AS(validate(sc), std::invalid_argument);
    sc = Scenario{};
    sc.q0 = Vec3<double>(50, 50, 5);
    CHECK_THROWS_AS(validate(sc), std::invalid_argument);
    sc = Scenario{};
    sc.user_x_min = 80.0;
    sc.user_x_max = 20.0;
    CHECK_THROWS_AS(validate(sc), std::invalid_argument);
    sc = Scenario{};
    sc.p_max = -1.0;
    CHECK_THROWS_AS(validate(sc), std::invalid_argument);
    sc = Scenario{};
    sc.beta0 = 0.0;
    CHECK_THROWS_AS(validate(sc), std::invalid_argument);
    CHECK_NOTHROW(validate(Scenario{}));
}
