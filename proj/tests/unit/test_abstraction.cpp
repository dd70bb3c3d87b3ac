#include <doctest.h>

#include <cmath>

#include "symabs/abstraction.hpp"
#include "symabs/certificates.hpp"
#include "symabs/error.hpp"
#include "symabs/random.hpp"

using namespace symabs;

namespace {

const SineSystem kSine(Matrix{{0.15, 0.0}, {0.0, 0.5}}, 2.0);
const AffineInterface kGain(-5.0 * Matrix::identity(2));
const LatticeParams kLattice(2, 0.15);

PiecewiseConstantSignal random_signal(CounterRng& rng, double lo, double hi, double horizon,
                                      double dwell) {
    std::vector<double> bps;
    std::vector<Vector> vals;
    for (double t = 0.0; t < horizon - 1e-9; t += dwell) {
        bps.push_back(std::round(t / dwell) * dwell);
        vals.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi)});
    }
    return PiecewiseConstantSignal(bps, vals, horizon);
}

double max_y_err(const AugmentedRun& run) {
    double m = 0.0;
    for (double e : run.y_err) m = std::max(m, e);
    return m;
}

}  // namespace

TEST_CASE("distance to the diagonal") {
    CHECK(omega_distance({{1.0, 1.0}, {1.0, 1.0}}) == 0.0);
    CHECK(omega_distance({{1.0, 0.0}, {0.0, 0.0}}) == 1.0);
    CHECK(omega_distance({{3.0, 4.0}, {0.0, 0.0}}) == doctest::Approx(5.0));
}

TEST_CASE("initial pair check") {
    const double x1[] = {0.0, 0.0};
    const double x2[] = {0.2, 0.0};
    CHECK_FALSE(initial_pair_check(x1, x2, 0.15));
    CHECK(initial_pair_check(x2, x2, 1e-9));

    CounterRng rng(1, 0);
    for (int k = 0; k < 1000; ++k) {
        const Vector x{rng.uniform(-5, 5), rng.uniform(-5, 5)};
        CHECK(initial_pair_check(x, quantize(x, kLattice).coordinates, 0.15));
    }
}

TEST_CASE("equilibrium run") {
    const AugmentedRun run = simulate_augmented(kSine, kGain, Vector{0.0, 0.0},
                                                PiecewiseConstantSignal::constant({0.0, 0.0}, 2.0),
                                                kLattice, 2.0);
    CHECK(run.size() == 2001);
    for (double e : run.y_err) CHECK(e == 0.0);
}

TEST_CASE("run invariants") {
    CounterRng rng(2, 0);
    const double horizon = 5.0;
    const auto v = random_signal(rng, -0.5, 0.5, horizon, 0.5);
    const Vector x0{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const AugmentedRun run = simulate_augmented(kSine, kGain, x0, v, kLattice, horizon);

    REQUIRE(run.size() == 5001);
    CHECK(run.phi_states.front() == quantize(x0, kLattice).coordinates);
    const GpsConstants c =
        gps_constants(Matrix::identity(2), Matrix::identity(2), kGain.gain(), 2.0, 2.0, 0.15);
    for (std::size_t i = 0; i < run.size(); ++i) {
        CHECK(run.x2_states[i] == quantize(run.phi_states[i], kLattice).coordinates);
        CHECK(norm(subtract(run.phi_states[i], run.x2_states[i])) <= 0.15);
        CHECK(norm(subtract(run.x1_states[i], run.x2_states[i])) <= (c.k1 + 1.0) * 0.15 + 0.01);
        const Vector u = apply_interface(kGain, run.v_values[i], run.x1_states[i], run.x2_states[i]);
        CHECK(u == run.u_values[i]);
        CHECK(run.v_values[i] == v.on_step(run.times[i], run.step));
    }
    CHECK(max_y_err(run) <= 0.5);
}

// Freezing x2 over a step shifts each lattice-cell switch by up to h, so
// the concrete state converges at first order in h.
TEST_CASE("step refinement converges at first order") {
    double coarse_gap = 0.0;
    double fine_gap = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        CounterRng rng(seed, 0);
        const auto v = random_signal(rng, -0.5, 0.5, 10.0, 0.5);
        const Vector x0{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        std::vector<AugmentedRun> runs;
        for (double h : {4e-3, 2e-3, 1e-3, 5e-4})
            runs.push_back(simulate_augmented(kSine, kGain, x0, v, kLattice, 10.0, h));
        auto gap = [&](std::size_t k) {
            double d = 0.0;
            for (std::size_t i = 0; i < runs[k].size(); ++i)
                d = std::max(d, norm(subtract(runs[k].x1_states[i], runs[k + 1].x1_states[2 * i])));
            return d;
        };
        coarse_gap += gap(0);
        fine_gap += gap(2);
        CHECK(gap(2) < 2e-2);
    }
    CHECK(coarse_gap / fine_gap >= 3.0);
}

TEST_CASE("input violations are reported") {
    const auto v = PiecewiseConstantSignal::constant({0.0, 0.0}, 1.0);
    try {
        simulate_augmented(kSine, kGain, Vector{0.9, 0.9}, v, kLattice, 1.0, 1e-3,
                           BoxInputSet::box({-0.1, -0.1}, {0.1, 0.1}));
        FAIL("expected InputViolation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InputViolation);
    }
}

TEST_CASE("misaligned input signal is rejected") {
    const PiecewiseConstantSignal v({0.0, 0.00025}, {{0.0, 0.0}, {0.1, 0.1}}, 1.0);
    try {
        simulate_augmented(kSine, kGain, Vector{0.0, 0.0}, v, kLattice, 1.0);
        FAIL("expected MisalignedSignal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MisalignedSignal);
    }
}
