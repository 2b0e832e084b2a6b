#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dss/errors.hpp"
#include "dss/mat.hpp"
#include "dss/signals.hpp"

#include <cmath>

using namespace dss;

TEST_CASE("zero and constant signals") {
    Signal z(SignalKind::zero, 2);
    CHECK(z.sample(0.3) == std::vector<double>{0.0, 0.0});
    CHECK(z.running_sup() == 0.0);

    Signal c(SignalKind::constant, 4, 2.0);
    const auto v = c.sample(1.0);
    // norm of the active value equals the amplitude
    CHECK(vec_norm(v) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(c.running_sup() == doctest::Approx(2.0));
}

TEST_CASE("step switches at the onset") {
    Signal s(SignalKind::step, 1, 0.5, 1.0, 2.0);
    CHECK(s.sample(1.999)[0] == 0.0);
    CHECK(s.running_sup() == 0.0);
    CHECK(s.sample(2.0)[0] == doctest::Approx(0.5));
    CHECK(s.running_sup() == doctest::Approx(0.5));
}

TEST_CASE("decaying signal follows amplitude * exp(-rate t)") {
    Signal d(SignalKind::decaying, 1, 3.0, 0.7);
    CHECK(d.sample(0.0)[0] == doctest::Approx(3.0));
    CHECK(d.sample(2.0)[0] == doctest::Approx(3.0 * std::exp(-1.4)).epsilon(1e-14));
    // sup was reached at t = 0
    CHECK(d.running_sup() == doctest::Approx(3.0));
}

TEST_CASE("random piecewise signal has exact norm, dwell plateaus, and seed determinism") {
    Signal a(SignalKind::random_piecewise, 3, 1.5, 1.0, 1.0, 0.25, 99);
    Signal b(SignalKind::random_piecewise, 3, 1.5, 1.0, 1.0, 0.25, 99);
    Signal c(SignalKind::random_piecewise, 3, 1.5, 1.0, 1.0, 0.25, 100);

    const auto va = a.sample(0.1);
    CHECK(vec_norm(va) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(va == b.sample(0.1));          // same seed, same value
    CHECK(va == b.sample(0.2));          // same dwell interval, constant
    CHECK(va != b.sample(0.3));          // next interval redraws
    CHECK(va != c.sample(0.1));          // different seed
    CHECK(a.running_sup() == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("invalid construction and sampling") {
    CHECK_THROWS_AS(Signal(SignalKind::zero, 0), InvalidInput);
    CHECK_THROWS_AS(Signal(SignalKind::random_piecewise, 1, 1.0, 1.0, 1.0, 0.0),
                    InvalidInput);
    CHECK_THROWS_AS(Signal(SignalKind::constant, 1, -1.0), InvalidInput);
    Signal s(SignalKind::zero, 1);
    CHECK_THROWS_AS(s.sample(-0.1), InvalidInput);
}
