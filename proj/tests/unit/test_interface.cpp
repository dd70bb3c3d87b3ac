#include <doctest.h>

#include <cmath>

#include "symabs/error.hpp"
#include "symabs/interface.hpp"
#include "symabs/random.hpp"

using namespace symabs;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::BadRange;
}

}  // namespace

TEST_CASE("apply interface") {
    const AffineInterface g(-5.0 * Matrix::identity(2));
    const double v[] = {1.0, 0.0};
    const double x1[] = {0.2, 0.2};
    const double x2[] = {0.0, 0.0};
    const Vector u = apply_interface(g, v, x1, x2);
    CHECK(u[0] == doctest::Approx(0.0));
    CHECK(u[1] == doctest::Approx(-1.0));

    CHECK(apply_interface(g, v, x1, x1) == Vector{1.0, 0.0});
    CHECK(apply_interface(AffineInterface(Matrix(2, 2)), v, x1, x2) == Vector{1.0, 0.0});

    const double short_v[] = {1.0};
    CHECK(code_of([&] { apply_interface(g, short_v, x1, x2); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("gain from the sine certificate is P^-1 R") {
    const Matrix p{{2.0, 0.0}, {0.0, 4.0}};
    const AffineInterface g = AffineInterface::from_sine_certificate(p, -4.0 * Matrix::identity(2));
    CHECK(g.gain()(0, 0) == doctest::Approx(-2.0));
    CHECK(g.gain()(1, 1) == doctest::Approx(-1.0));
}

TEST_CASE("interface is invariant under a common shift") {
    CounterRng rng(3, 0);
    Matrix gain(2, 3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) gain(i, j) = rng.uniform(-5, 5);
    const AffineInterface g(gain);
    for (int k = 0; k < 100; ++k) {
        Vector v(2), x1(3), x2(3), d(3);
        for (double& e : v) e = rng.uniform(-1, 1);
        for (double& e : x1) e = rng.uniform(-1, 1);
        for (double& e : x2) e = rng.uniform(-1, 1);
        for (double& e : d) e = rng.uniform(-10, 10);
        const Vector a = apply_interface(g, v, x1, x2);
        const Vector b = apply_interface(g, v, add(x1, d), add(x2, d));
        for (std::size_t i = 0; i < 2; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
}

TEST_CASE("input margin") {
    const Matrix l = -5.0 * Matrix::identity(2);
    CHECK(input_margin(l, 2.3113, 0.15) == doctest::Approx(2.48348).epsilon(1e-5));
    CHECK(input_margin(Matrix(2, 2), 2.3, 0.15) == 0.0);
    CHECK(input_margin(l, 2.3, 0.0) == 0.0);
    CHECK(code_of([&] { input_margin(l, -1.0, 0.1); }) == ErrorCode::BadRange);
}

TEST_CASE("shrinking the input box") {
    const BoxInputSet u = BoxInputSet::box({-3.0, -3.0}, {3.0, 3.0});
    const BoxInputSet inner = shrink_box(u, 2.48349);
    CHECK(inner.lower()[0] == doctest::Approx(-0.51651));
    CHECK(inner.upper()[1] == doctest::Approx(0.51651));
    CHECK(shrink_box(u, 0.0) == u);
    CHECK(shrink_box(BoxInputSet::all_space(), 5.0).is_all_space());
    CHECK(code_of([] { shrink_box(BoxInputSet::box({-1.0}, {1.0}), 1.5); }) == ErrorCode::EmptyResult);
    CHECK(code_of([&] { shrink_box(u, -0.1); }) == ErrorCode::BadRange);
}

TEST_CASE("shrunk box absorbs every correction within the margin") {
    CounterRng rng(4, 0);
    const BoxInputSet u = BoxInputSet::box({-3.0, -1.0}, {3.0, 2.0});
    const double r = 0.9;
    const BoxInputSet inner = shrink_box(u, r);
    for (int k = 0; k < 10000; ++k) {
        Vector v(2), d(2);
        for (std::size_t i = 0; i < 2; ++i) v[i] = rng.uniform(inner.lower()[i], inner.upper()[i]);
        // Uniform direction, radius up to r.
        const double theta = rng.uniform(0.0, 2.0 * M_PI);
        const double rad = r * rng.uniform01();
        d[0] = rad * std::cos(theta);
        d[1] = rad * std::sin(theta);
        CHECK(u.contains(add(v, d)));
    }
}
