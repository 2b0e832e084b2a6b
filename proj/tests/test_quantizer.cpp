#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dss/errors.hpp"
#include "dss/quantizer.hpp"
#include "dss/rng.hpp"

#include <cmath>

using namespace dss;

TEST_CASE("floor quantizer on known values") {
    const auto q = QuantizerSpec::make_floor(10.0);
    CHECK(q.delta_q == doctest::Approx(0.1));
    CHECK(std::isinf(q.M_q));

    auto r = quantize(q, {0.26});
    CHECK(r.value[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK_FALSE(r.overflow);

    r = quantize(q, {-0.26});
    CHECK(r.value[0] == doctest::Approx(-0.3).epsilon(1e-14));

    r = quantize(q, {0.0});
    CHECK(r.value[0] == 0.0);
}

TEST_CASE("floor quantizer error is one-sided in [0, delta_q)") {
    const auto q = QuantizerSpec::make_floor(4.0);
    Rng rng(3);
    for (int i = 0; i < 100000; ++i) {
        const double x = rng.uniform(-50.0, 50.0);
        const auto r = quantize(q, {x});
        const double e = x - r.value[0];
        CHECK(e >= 0.0);
        CHECK(e < 0.25 + 1e-12);
    }
}

TEST_CASE("quantization is idempotent") {
    const auto q = QuantizerSpec::make_floor(7.0);
    Rng rng(8);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(-5.0, 5.0);
        const auto once = quantize(q, {x});
        const auto twice = quantize(q, once.value);
        CHECK(once.value[0] == twice.value[0]);
    }
}

TEST_CASE("range quantizer clamps and flags overflow") {
    // sensitivity 0.5, range 2: lattice of cell centers covering [-2, 2]
    const auto q = QuantizerSpec::make_range(0.5, 2.0);
    CHECK(q.N % 2 == 1);

    auto r = quantize(q, {0.2});
    CHECK(std::abs(r.value[0] - 0.2) <= 0.5 + 1e-12);
    CHECK_FALSE(r.overflow);

    r = quantize(q, {5.0});
    CHECK(r.overflow);
    CHECK(std::abs(r.value[0]) <= 2.0 + 1e-12);

    r = quantize(q, {-1.9, 1.9});
    CHECK_FALSE(r.overflow);
    CHECK(std::abs(r.value[0] + 1.9) <= 0.5 + 1e-12);
    CHECK(std::abs(r.value[1] - 1.9) <= 0.5 + 1e-12);
}

TEST_CASE("in-range error respects the sensitivity bound over random draws") {
    const auto q = QuantizerSpec::make_range(0.25, 3.0);
    Rng rng(12);
    for (int i = 0; i < 100000; ++i) {
        const double x = rng.uniform(-3.0, 3.0);
        const auto r = quantize(q, {x});
        CHECK_FALSE(r.overflow);
        CHECK(std::abs(x - r.value[0]) <= 0.25 + 1e-12);
    }
}

TEST_CASE("error_bound is sqrt(n) * delta_q") {
    const auto q = QuantizerSpec::make_floor(2.0);
    CHECK(error_bound(q, 4) == doctest::Approx(2.0 * 0.5).epsilon(1e-14));
    const auto r = QuantizerSpec::make_range(0.1, 1.0);
    CHECK(error_bound(r, 9) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("invalid specs throw") {
    CHECK_THROWS_AS(QuantizerSpec::make_floor(0.0), InvalidInput);
    CHECK_THROWS_AS(QuantizerSpec::make_range(-0.1, 1.0), InvalidInput);
    CHECK_THROWS_AS(QuantizerSpec::make_range(0.5, 0.0), InvalidInput);
}
