#include <doctest.h>

#include <cmath>
#include <numbers>

#include "symabs/dynamics.hpp"
#include "symabs/error.hpp"

using namespace symabs;

namespace {

// x' = -x as an iqc-family system with no input and no nonlinearity.
IqcSystem decay() {
    return IqcSystem(Matrix{{-1.0}}, Matrix{{0.0}}, Matrix{{1.0}}, Matrix{{0.0}}, Matrix{{0.0}},
                     Matrix{{0.0}}, elementwise_nonlinearity("zero", 1));
}

double decay_error(double h) {
    const auto traj = integrate_rk4(decay(), Vector{1.0},
                                    PiecewiseConstantSignal::constant({0.0}, 1.0), 1.0, h);
    return std::abs(traj.states.back()[0] - std::exp(-1.0));
}

const SineSystem kSine(Matrix{{0.15, 0.0}, {0.0, 0.5}}, 2.0);

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

TEST_CASE("right-hand side") {
    const double zero[] = {0.0, 0.0};
    CHECK(eval_rhs(kSine, zero, zero) == Vector{0.0, 0.0});

    const double x[] = {std::numbers::pi / 2, 0.0};
    const double u[] = {1.0, 1.0};
    const Vector f = eval_rhs(kSine, x, u);
    CHECK(f[0] == doctest::Approx(3.23562).epsilon(1e-5));
    CHECK(f[1] == doctest::Approx(1.0));

    const IqcSystem integrator(Matrix(2, 2), Matrix::identity(2), Matrix::identity(2), Matrix(2, 2),
                               Matrix::identity(2), Matrix(2, 2), elementwise_nonlinearity("sin", 2));
    const double any[] = {3.0, -7.0};
    const double u2[] = {1.0, 0.0};
    CHECK(eval_rhs(integrator, any, u2) == Vector{1.0, 0.0});

    const double short_u[] = {1.0};
    CHECK(code_of([&] { eval_rhs(kSine, zero, short_u); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("iqc shape validation") {
    CHECK(code_of([] {
              IqcSystem(Matrix::identity(2), Matrix::identity(3), Matrix::identity(2), Matrix(2, 2),
                        Matrix::identity(2), Matrix(2, 2), elementwise_nonlinearity("sin", 2));
          }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("implicit nonlinearity loop is solved to a fixed point") {
    // w = tanh(x + 0.5 w) is contractive.
    const IqcSystem sys(Matrix{{0.0}}, Matrix{{0.0}}, Matrix{{1.0}}, Matrix{{1.0}}, Matrix{{1.0}},
                        Matrix{{0.5}}, elementwise_nonlinearity("tanh", 1));
    const double x[] = {0.7};
    const double w = sys.nonlinear_term(x)[0];
    CHECK(w == doctest::Approx(std::tanh(0.7 + 0.5 * w)).epsilon(1e-12));
}

TEST_CASE("rk4 single step and order") {
    const auto one = integrate_rk4(decay(), Vector{1.0},
                                   PiecewiseConstantSignal::constant({0.0}, 0.1), 0.1, 0.1);
    REQUIRE(one.states.size() == 2);
    CHECK(one.states[1][0] == doctest::Approx(0.9048375).epsilon(1e-7));

    double prev = decay_error(0.1);
    for (double h : {0.05, 0.025, 0.0125}) {
        const double err = decay_error(h);
        const double ratio = prev / err;
        CHECK(ratio >= 14.0);
        CHECK(ratio <= 18.0);
        prev = err;
    }
}

TEST_CASE("equilibrium stays put") {
    const auto traj = integrate_rk4(kSine, Vector{0.0, 0.0},
                                    PiecewiseConstantSignal::constant({0.0, 0.0}, 1.0), 1.0);
    CHECK(traj.states.size() == 1001);
    for (const Vector& x : traj.states) CHECK(x == Vector{0.0, 0.0});
}

TEST_CASE("piecewise-constant signal") {
    const PiecewiseConstantSignal s({0.0, 1.0}, {{1.0, 0.0}, {0.0, 1.0}}, 2.0);
    CHECK(eval_signal(s, 0.5) == Vector{1.0, 0.0});
    CHECK(eval_signal(s, 1.0) == Vector{0.0, 1.0});
    CHECK(code_of([&] { eval_signal(s, 2.0); }) == ErrorCode::OutOfDomain);
    CHECK(code_of([&] { eval_signal(s, -0.1); }) == ErrorCode::OutOfDomain);

    CHECK(code_of([] {
              PiecewiseConstantSignal({0.0, 1.0}, {{5.0}, {0.0}}, 2.0,
                                      BoxInputSet::box({-1.0}, {1.0}));
          }) == ErrorCode::InputViolation);
    CHECK(code_of([] { PiecewiseConstantSignal({0.5}, {{0.0}}, 2.0); }) == ErrorCode::BadRange);
}

TEST_CASE("grid alignment") {
    CHECK(grid_steps(10.0, 1e-3) == 10000);
    CHECK(grid_steps(0.0, 1e-3) == 0);
    CHECK(code_of([] { grid_steps(1.0, 0.3); }) == ErrorCode::MisalignedSignal);

    const PiecewiseConstantSignal s({0.0, 0.25}, {{0.0}, {1.0}}, 1.0);
    CHECK(code_of([&] { require_aligned(s, 0.1); }) == ErrorCode::MisalignedSignal);
    require_aligned(s, 0.05);
}

TEST_CASE("divergence guard") {
    const IqcSystem growth(Matrix{{50.0}}, Matrix{{0.0}}, Matrix{{1.0}}, Matrix{{0.0}}, Matrix{{0.0}},
                           Matrix{{0.0}}, elementwise_nonlinearity("zero", 1));
    CHECK(code_of([&] {
              integrate_rk4(growth, Vector{1.0}, PiecewiseConstantSignal::constant({0.0}, 2.0), 2.0);
          }) == ErrorCode::Diverged);
}
