#include <doctest.h>

#include <Eigen/Dense>

#include "symabs/error.hpp"
#include "symabs/numerics.hpp"
#include "symabs/random.hpp"

using namespace symabs;

namespace {

Matrix random_symmetric(CounterRng& rng, std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform(-5.0, 5.0);
    return m;
}

Matrix random_matrix(CounterRng& rng, std::size_t r, std::size_t c) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(-5.0, 5.0);
    return m;
}

}  // namespace

TEST_CASE("eigenvalues of small symmetric matrices") {
    const double d[] = {-0.9, -0.2};
    auto e = eig_extremes(Matrix::diagonal(d));
    CHECK(e.lambda_min == doctest::Approx(-0.9));
    CHECK(e.lambda_max == doctest::Approx(-0.2));

    e = eig_extremes(Matrix{{2, 1}, {1, 2}});
    CHECK(e.lambda_min == doctest::Approx(1.0));
    CHECK(e.lambda_max == doctest::Approx(3.0));

    e = eig_extremes(Matrix::identity(3));
    CHECK(e.lambda_min == doctest::Approx(1.0));
    CHECK(e.lambda_max == doctest::Approx(1.0));
}

TEST_CASE("eigenvalue input validation") {
    CHECK_THROWS_AS(symmetric_eigenvalues(Matrix(2, 3)), Error);
    try {
        symmetric_eigenvalues(Matrix{{1, 2}, {0, 1}});
        FAIL("expected NotSymmetric");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotSymmetric);
    }
    Matrix nan_m = Matrix::identity(2);
    nan_m(0, 0) = std::nan("");
    try {
        symmetric_eigenvalues(nan_m);
        FAIL("expected NonFinite");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonFinite);
    }
}

TEST_CASE("negative semidefiniteness") {
    CHECK(nsd_check(-1.0 * Matrix::identity(2)).holds);

    const auto boundary = nsd_check(Matrix{{-1.7, 1}, {1, -1}});
    CHECK(boundary.holds);  // det 0.7 > 0, trace < 0
    CHECK(boundary.max_eig < 0.0);

    const auto indefinite = nsd_check(Matrix{{-0.9, 1}, {1, -1}});
    CHECK_FALSE(indefinite.holds);
    CHECK(indefinite.max_eig > 0.0);

    // Exactly singular block: [[-1, 1], [1, -1]] has eigenvalues {-2, 0}.
    const auto singular = nsd_check(Matrix{{-1, 1}, {1, -1}});
    CHECK(singular.holds);
    CHECK(singular.max_eig == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spectral norm") {
    CHECK(spectral_norm(-5.0 * Matrix::identity(2)) == doctest::Approx(5.0));
    CHECK(spectral_norm(25.0 * Matrix::identity(2)) == doctest::Approx(25.0));
    CHECK(spectral_norm(Matrix{{3, 4}, {0, 0}}) == doctest::Approx(5.0));
}

TEST_CASE("solve") {
    const Matrix a{{2, 1}, {1, 3}};
    const Matrix x = solve(a, Matrix::identity(2));
    const Matrix prod = a * x;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(prod(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
    CHECK_THROWS_AS(solve(Matrix{{1, 2}, {2, 4}}, Matrix::identity(2)), Error);
}

TEST_CASE("eigenvalue bounds sandwich random symmetric matrices") {
    CounterRng rng(2024, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const Matrix m = random_symmetric(rng, n);
        const auto e = eig_extremes(m);
        const Matrix eye = Matrix::identity(n);
        CHECK(nsd_check(m - e.lambda_max * eye, 10 * kDefaultTol).holds);
        CHECK(nsd_check(e.lambda_min * eye - m, 10 * kDefaultTol).holds);
    }
}

TEST_CASE("spectral norm is transpose invariant") {
    CounterRng rng(2024, 1);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix m = random_matrix(rng, 1 + trial % 4, 1 + (trial / 4) % 5);
        CHECK(spectral_norm(m) == doctest::Approx(spectral_norm(m.transpose())).epsilon(1e-9));
    }
}

TEST_CASE("nsd verdict bounds the quadratic form") {
    CounterRng rng(2024, 2);
    int verdicts = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 1 + trial % 5;
        Matrix m = random_symmetric(rng, n);
        m -= eig_extremes(m).lambda_max * Matrix::identity(n);  // push toward NSD
        if (!nsd_check(m).holds) continue;
        ++verdicts;
        for (int k = 0; k < 100; ++k) {
            Vector z(n);
            for (double& v : z) v = rng.uniform(-1.0, 1.0);
            CHECK(quadratic_form(m, z) <= kDefaultTol * dot(z, z) + 1e-12);
        }
    }
    CHECK(verdicts > 100);
}

TEST_CASE("Jacobi spectrum agrees with an independent solver") {
    CounterRng rng(2024, 3);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 10;
        const Matrix m = random_symmetric(rng, n);
        Eigen::MatrixXd em(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) em(i, j) = m(i, j);
        const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(em).eigenvalues();
        const Vector ours = symmetric_eigenvalues(m);
        REQUIRE(ours.size() == n);
        for (std::size_t i = 0; i < n; ++i) CHECK(ours[i] == doctest::Approx(ref(i)).epsilon(1e-10));
    }
}

TEST_CASE("counter generator is reproducible per stream") {
    CounterRng a(7, 3), b(7, 3), c(7, 4);
    bool differs = false;
    for (int i = 0; i < 16; ++i) {
        const auto x = a();
        CHECK(x == b());
        differs = differs || x != c();
    }
    CHECK(differs);
    CounterRng u(1, 0);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform01();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}
