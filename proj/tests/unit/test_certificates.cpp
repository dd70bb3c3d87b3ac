#include <doctest.h>

#include <cmath>

#include "symabs/certificates.hpp"
#include "symabs/error.hpp"
#include "symabs/random.hpp"

using namespace symabs;

namespace {

const Matrix kA{{0.15, 0.0}, {0.0, 0.5}};
const Matrix kI2 = Matrix::identity(2);
const Matrix kGain = -5.0 * Matrix::identity(2);

SineCertificate example_cert(double alpha) { return {kI2, kGain, alpha, 2.0}; }

IqcSystem scalar_iqc() {
    return IqcSystem(Matrix{{0.0}}, Matrix{{1.0}}, Matrix{{1.0}}, Matrix{{0.0}}, Matrix{{0.0}},
                     Matrix{{0.0}}, elementwise_nonlinearity("zero", 1));
}

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

TEST_CASE("sine-family matrix inequality") {
    const LmiVerdict at_24 = check_lmi_sine(example_cert(2.4), kA);
    CHECK_FALSE(at_24.holds);
    CHECK(at_24.max_eig > 0.0);
    // Top-left block diag(-0.9, -0.2); Schur complement with the -I block
    // is that plus P P = diag(0.1, 0.8), not negative semidefinite.
    CHECK(at_24.assembled(0, 0) == doctest::Approx(-0.9));
    CHECK(at_24.assembled(1, 1) == doctest::Approx(-0.2));
    CHECK(at_24.max_eig == doctest::Approx(0.4770329614).epsilon(1e-9));

    const LmiVerdict at_20 = check_lmi_sine(example_cert(2.0), kA);
    CHECK(at_20.holds);
    CHECK(std::abs(at_20.max_eig) < 1e-12);

    const SineCertificate scalar{Matrix{{1.0}}, Matrix{{-1.0}}, 0.5, 0.0};
    const LmiVerdict s = check_lmi_sine(scalar, Matrix{{0.0}});
    CHECK(s.holds);
    CHECK(s.max_eig == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sine verdict is invariant under coordinate permutation") {
    const Matrix a{{0.5, 0.0}, {0.0, 0.15}};
    for (double alpha : {1.0, 2.0, 2.4}) {
        CHECK(check_lmi_sine(example_cert(alpha), kA).holds ==
              check_lmi_sine(example_cert(alpha), a).holds);
    }
    CounterRng rng(5, 0);
    for (int k = 0; k < 50; ++k) {
        Matrix ar(3, 3), r(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                ar(i, j) = rng.uniform(-1, 1);
                r(i, j) = rng.uniform(-3, 1);
            }
        const Matrix p = Matrix::identity(3);
        const Matrix perm{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
        const Matrix pt = perm.transpose();
        const double alpha = rng.uniform(0.1, 2.0);
        const SineCertificate c{p, r, alpha, 0.5};
        const SineCertificate cp{perm * p * pt, perm * r * pt, alpha, 0.5};
        const auto v1 = check_lmi_sine(c, ar);
        const auto v2 = check_lmi_sine(cp, perm * ar * pt);
        CHECK(v1.holds == v2.holds);
        CHECK(v1.max_eig == doctest::Approx(v2.max_eig).epsilon(1e-9));
    }
}

TEST_CASE("iqc-family matrix inequality") {
    IqcCertificate cert{Matrix{{1.0}}, Matrix{{-1.0}}, 0.5, Matrix(2, 2)};
    const LmiVerdict ok = check_lmi_iqc(cert, scalar_iqc());
    CHECK(ok.holds);
    CHECK(ok.assembled == Matrix{{-1.0, 0.0}, {0.0, 0.0}});

    cert.alpha = 1.5;
    const LmiVerdict bad = check_lmi_iqc(cert, scalar_iqc());
    CHECK_FALSE(bad.holds);
    CHECK(bad.assembled(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("positive definiteness of P") {
    CHECK(code_of([] { require_positive_definite(Matrix{{1.0, 0.0}, {0.0, -1.0}}); }) ==
          ErrorCode::NotPositiveDefinite);
    CHECK(code_of([] { require_positive_definite(Matrix{{1.0, 2.0}, {0.0, 1.0}}); }) ==
          ErrorCode::NotSymmetric);
}

TEST_CASE("decay-rate bisection") {
    auto feasible = [](double alpha) { return check_lmi_sine(example_cert(alpha), kA).holds; };
    const AlphaSearch s = max_feasible_alpha(feasible, 2.4);
    CHECK(s.alpha == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_FALSE(s.feasible_at_hi);

    CHECK(max_feasible_alpha([](double) { return true; }, 3.0).feasible_at_hi);
    CHECK(code_of([] { max_feasible_alpha([](double) { return false; }, 3.0); }) ==
          ErrorCode::Infeasible);
}

TEST_CASE("Lipschitz multiplier and sampled quadratic constraint") {
    CHECK(lipschitz_delta_mm(1.0, 1, 1) == Matrix{{1.0, 0.0}, {0.0, -1.0}});
    CHECK(lipschitz_delta_mm(2.0, 1, 1) == Matrix{{4.0, 0.0}, {0.0, -1.0}});

    CounterRng rng(8, 0);
    std::vector<std::pair<Vector, Vector>> pairs(10000);
    for (auto& [a, b] : pairs) {
        a = {rng.uniform(-10, 10)};
        b = {rng.uniform(-10, 10)};
    }
    const Matrix m = lipschitz_delta_mm(1.0, 1, 1);
    const auto sin_v = delta_qc_sample_check(elementwise_nonlinearity("sin", 1), m, pairs);
    CHECK(sin_v.holds);
    CHECK(sin_v.pairs_checked == 10000);

    const std::vector<std::pair<Vector, Vector>> one{{{0.0}, {2.0}}};
    const auto sq = delta_qc_sample_check(elementwise_nonlinearity("square", 1), m, one);
    CHECK_FALSE(sq.holds);
    REQUIRE(sq.witness.has_value());
    CHECK(sq.witness->form == doctest::Approx(-12.0));
    CHECK(sq.witness->q1 == Vector{0.0});
    CHECK(sq.witness->q2 == Vector{2.0});

    CHECK(delta_qc_sample_check(elementwise_nonlinearity("square", 1), Matrix(2, 2), pairs).holds);
}

TEST_CASE("practical-stability constants") {
    const GpsConstants c = gps_constants(kI2, kI2, kGain, 2.4, 2.4, 0.15);
    CHECK(c.k == doctest::Approx(2.4));
    CHECK(c.lhat_norm == doctest::Approx(25.0));
    CHECK(c.k1 == doctest::Approx(std::sqrt(1.0 + 25.0 / 5.76)));
    CHECK(c.k1 == doctest::Approx(2.3113).epsilon(1e-3 / 2.3113));
    CHECK(c.practical_offset == doctest::Approx(0.4625));
    CHECK(c.beta_coeff == doctest::Approx(1.0));
    CHECK(c.beta_rate == doctest::Approx(1.2));
    CHECK(c.gamma == doctest::Approx(2.4));
    CHECK(c.sigma_bound == doctest::Approx(25.0 * 0.0225 / 2.4));
    CHECK(c.omega_bound == doctest::Approx(0.15));

    const Matrix p{{2.0, 0.0}, {0.0, 0.5}};
    const GpsConstants z = gps_constants(p, kI2, Matrix(2, 2), 1.0, 1.0, 0.2);
    CHECK(z.k1 == doctest::Approx(2.0));
    CHECK(z.practical_offset == doctest::Approx(0.2));

    CHECK(code_of([] { gps_constants(kI2, kI2, kGain, 2.4, 4.8, 0.15); }) == ErrorCode::BadRange);
    CHECK(code_of([] { gps_constants(kI2, kI2, kGain, 2.4, 4.8 - 1e-12, 0.15); }) ==
          ErrorCode::BadRange);
    CHECK(code_of([] { gps_constants(kI2, kI2, kGain, 2.4, 0.0, 0.15); }) == ErrorCode::BadRange);
}

TEST_CASE("closed-form quantization radius") {
    const double bound = eta_bound_iqc(kI2, kI2, kGain, kI2, 2.4, 2.4, 0.5);
    CHECK(bound == doctest::Approx(0.5 * 2.4 / (2.4 + std::sqrt(30.76))).epsilon(1e-12));
    CHECK(std::abs(bound - 0.15099) < 1e-4);
    CHECK(0.15 <= bound);

    CHECK(eta_bound_iqc(kI2, kI2, Matrix(2, 2), kI2, 1.3, 1.3, 0.8) == doctest::Approx(0.4));

    // Increasing in epsilon, decreasing in the gain.
    double prev = 0.0;
    for (double eps : {0.1, 0.2, 0.5, 1.0, 2.0}) {
        const double b = eta_bound_iqc(kI2, kI2, kGain, kI2, 2.4, 2.4, eps);
        CHECK(b > prev);
        prev = b;
    }
    prev = 1e300;
    for (double g : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double b = eta_bound_iqc(kI2, kI2, -g * kI2, kI2, 2.4, 2.4, 0.5);
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("admissible radius by bisection") {
    const MonomialKInf quad(1.0, 2.0);
    const PrecisionSpec spec{0.5, 1.0};
    CHECK(eta_feasible(spec, quad, quad, GasCondition{}) == doctest::Approx(0.25).epsilon(1e-9));

    const GpsCondition gps{2.4, MonomialKInf(25.0 / 2.4, 2.0)};
    const double g = eta_feasible(spec, quad, quad, gps);
    CHECK(g == doctest::Approx(0.5 / (2.0 + std::sqrt(25.0 / 5.76))).epsilon(1e-9));
    CHECK(g == doctest::Approx(0.12245).epsilon(1e-4));

    CHECK(code_of([&] { eta_feasible(PrecisionSpec{0.0, 1.0}, quad, quad, GasCondition{}); }) ==
          ErrorCode::Infeasible);

    CounterRng rng(12, 0);
    for (int k = 0; k < 50; ++k) {
        const MonomialKInf lo(rng.uniform(0.1, 2.0), 2.0);
        const MonomialKInf hi(lo.coeff() * rng.uniform(1.0, 4.0), 2.0);
        const PrecisionSpec s{rng.uniform(0.1, 2.0), rng.uniform(0.5, 2.0)};
        const GpsCondition mode{rng.uniform(0.5, 3.0), MonomialKInf(rng.uniform(0.1, 20.0), 2.0)};
        CHECK(eta_feasible(s, lo, hi, GasCondition{}) >= eta_feasible(s, lo, hi, mode));
    }
}

TEST_CASE("monomial comparison functions") {
    const MonomialKInf f(2.0, 2.0);
    CHECK(kinf_eval(f, 3.0, KInfDirection::Forward) == doctest::Approx(18.0));
    CHECK(kinf_eval(f, 18.0, KInfDirection::Inverse) == doctest::Approx(3.0));
    CHECK(code_of([&] { (void)f.value(-1.0); }) == ErrorCode::NegativeInput);
    CHECK(code_of([] { MonomialKInf(1.0, 0.5); }) == ErrorCode::BadRange);

    const MonomialKInf unit(1.0, 2.0);
    CHECK(unit.inverse(2.0) <= unit.inverse(1.0) + unit.inverse(1.0));

    CounterRng rng(13, 0);
    for (int k = 0; k < 1000; ++k) {
        const MonomialKInf g(rng.uniform(0.01, 100.0), rng.uniform(1.0, 5.0));
        const double x = std::pow(10.0, rng.uniform(-6.0, 6.0));
        CHECK(g.inverse(g.value(x)) == doctest::Approx(x).epsilon(1e-12));
    }
}
