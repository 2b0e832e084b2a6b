#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dss/errors.hpp"
#include "dss/mat.hpp"
#include "dss/rng.hpp"

#include <cmath>

using namespace dss;

TEST_CASE("arithmetic and shape") {
    Mat a{{1.0, 2.0}, {3.0, 4.0}};
    Mat b{{0.5, -1.0}, {2.0, 0.0}};
    const Mat s = a + b;
    CHECK(s(0, 0) == doctest::Approx(1.5));
    CHECK(s(1, 1) == doctest::Approx(4.0));
    const Mat p = a * b;
    CHECK(p(0, 0) == doctest::Approx(4.5));
    CHECK(p(0, 1) == doctest::Approx(-1.0));
    CHECK(p(1, 0) == doctest::Approx(9.5));
    CHECK(p(1, 1) == doctest::Approx(-3.0));
    const Mat t = a.transpose();
    CHECK(t(0, 1) == 3.0);
    CHECK((2.0 * a)(1, 0) == 6.0);
}

TEST_CASE("symmetric eigenvalues of a known 2x2") {
    // [[2,1],[1,2]] has eigenvalues 1 and 3
    Mat m{{2.0, 1.0}, {1.0, 2.0}};
    const auto e = sym_eigenvalues(m);
    REQUIRE(e.size() == 2);
    CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("spectral norm of a diagonal matrix is the largest |entry|") {
    const Mat d = Mat::diag({-3.0, 0.5, 2.0});
    CHECK(spectral_norm(d) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("closed-loop boundary matrix norm matches the closed form") {
    // A = H + BK for the transport example with two states; A^T A has
    // trace 15/16 and determinant 1/256, so
    // sigma_max = sqrt((15/16 + sqrt(221/256)) / 2).
    Mat A{{0.25, -0.5}, {-0.25, 0.75}};
    const double closed_form = std::sqrt((15.0 / 16.0 + std::sqrt(221.0 / 256.0)) / 2.0);
    CHECK(spectral_norm(A) == doctest::Approx(closed_form).epsilon(1e-13));
    // frozen decimal value of the same quantity
    CHECK(closed_form == doctest::Approx(0.96608211263520627).epsilon(1e-14));
    CHECK(closed_form < 1.0);
}

TEST_CASE("eigenvalues are invariant under transposition-symmetric noise") {
    Rng rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        Mat m(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                const double v = rng.uniform(-2.0, 2.0);
                m(i, j) = v;
                m(j, i) = v;
            }
        const auto e1 = sym_eigenvalues(m);
        const auto e2 = sym_eigenvalues(m.transpose());
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(e1[k] == doctest::Approx(e2[k]).epsilon(1e-10));
    }
}

TEST_CASE("Rayleigh quotient bounds on random symmetric matrices") {
    Rng rng(7);
    for (int rep = 0; rep < 1000; ++rep) {
        Mat m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                const double v = rng.uniform(-1.0, 1.0);
                m(i, j) = v;
                m(j, i) = v;
            }
        const auto e = sym_eigenvalues(m);
        std::vector<double> x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                              rng.uniform(-1.0, 1.0)};
        const double nx2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        if (nx2 < 1e-12) continue;
        const auto mx = mat_vec(m, x);
        const double q = (x[0] * mx[0] + x[1] * mx[1] + x[2] * mx[2]) / nx2;
        CHECK(q >= e.front() - 1e-9);
        CHECK(q <= e.back() + 1e-9);
    }
}

TEST_CASE("min_eig_sym rejects asymmetric input") {
    Mat m{{1.0, 2.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(min_eig_sym(m), InvalidInput);
}

TEST_CASE("is_pd_above is strict") {
    const Mat I2 = Mat::identity(2);
    CHECK(is_pd_above(I2, 0.5));
    CHECK_FALSE(is_pd_above(I2, 1.0));
}

TEST_CASE("solve_linear on a known system and round trip") {
    Mat m{{4.0, 1.0}, {2.0, 3.0}};
    const std::vector<double> b{9.0, 13.0};
    const auto x = solve_linear(m, b);
    // 4x + y = 9, 2x + 3y = 13 -> x = 1.4, y = 3.4
    CHECK(x[0] == doctest::Approx(1.4).epsilon(1e-13));
    CHECK(x[1] == doctest::Approx(3.4).epsilon(1e-13));
    const auto back = mat_vec(m, x);
    CHECK(back[0] == doctest::Approx(9.0).epsilon(1e-13));
    CHECK(back[1] == doctest::Approx(13.0).epsilon(1e-13));
}

TEST_CASE("vector norms") {
    CHECK(vec_norm({3.0, 4.0}) == doctest::Approx(5.0));
    CHECK(vec_inf_norm({-3.0, 2.0}) == 3.0);
}
