#pragma once

// Trajectory-level checks of the approximate simulation relation.
//
// Closeness for *every* abstract input cannot be decided numerically, so
// the relation is exercised on seeded random families of piecewise-constant
// inputs. A pass is "certified by the chosen eta condition + empirically
// consistent", and reports carry the seed and trial count needed to replay.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "symabs/abstraction.hpp"
#include "symabs/certificates.hpp"

namespace symabs {

struct OutputSeries {
    std::vector<double> times;
    std::vector<Vector> values;
};

struct CloseVerdict {
    bool holds = true;
    double max_gap = 0.0;
    double argmax_time = 0.0;

    explicit operator bool() const noexcept { return holds; }
};

/// Pass iff max_i ||z1[i] - z2[i]|| <= epsilon. Throws GridMismatch unless
/// both series share the same time grid.
CloseVerdict eps_close(const OutputSeries& z1, const OutputSeries& z2, double epsilon);

/// Output series h(x1) and h(x2) of an augmented run.
OutputSeries concrete_outputs(const SystemModel& sys, const AugmentedRun& run);
OutputSeries abstract_outputs(const SystemModel& sys, const AugmentedRun& run);

struct RelationTrialSpec {
    BoxInputSet initial_box = BoxInputSet::all_space();      // x1(0) ~ uniform
    BoxInputSet abstract_inputs = BoxInputSet::all_space();  // v values ~ uniform (U')
    BoxInputSet inputs = BoxInputSet::all_space();           // U, for admissibility
    double dwell = 0.5;
    double horizon = 10.0;
    double step = kDefaultStep;
    std::size_t trials = 20;
    std::uint64_t seed = 0;
};

struct TrialInputs {
    Vector x1_0;
    PiecewiseConstantSignal v;
};

/// Inputs of trial k, drawn from the counter-based stream (seed, k). Throws
/// BadRange if either box is unbounded or the dwell is not positive.
TrialInputs draw_trial(const RelationTrialSpec& spec, std::size_t k);

enum class TrialStatus { Ok, InputViolation };

struct TrialResult {
    TrialStatus status = TrialStatus::Ok;
    double max_err = 0.0;
    double argmax_time = 0.0;
};

struct RelationReport {
    bool pass = true;
    double max_err = 0.0;
    double argmax_time = 0.0;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<TrialResult> per_trial;
    std::string certified_by;  // which eta condition the caller relied on
};

/// Called with each successful trial's run, in trial order.
using TrialObserver = std::function<void(std::size_t, const AugmentedRun&)>;

/// Runs every trial through simulate_augmented and eps_close at the given
/// precision. Input-set violations count as failed trials; other simulation
/// errors propagate.
RelationReport verify_simulation_relation(const SystemModel& sys, const AffineInterface& iface,
                                          const LatticeParams& params,
                                          const PrecisionSpec& precision,
                                          const RelationTrialSpec& spec,
                                          std::string certified_by = {},
                                          const TrialObserver& observer = {});

struct GpsReport {
    bool pass = true;
    double worst_margin = 0.0;  // min over samples of bound - distance
    double worst_time = 0.0;
    double beta_coeff = 0.0;
    double beta_rate = 0.0;
    double practical_offset = 0.0;

    explicit operator bool() const noexcept { return pass; }
};

/// Checks ||x1 - x2|| <= beta_coeff e^{-beta_rate t} d0 + practical_offset + tol
/// at every sample, d0 the distance at t = 0.
GpsReport verify_gps_trajectory(const AugmentedRun& run, const GpsConstants& consts,
                                double tol = 1e-3);

struct LyapunovReport {
    std::size_t interior_samples = 0;
    std::size_t violations = 0;
    double worst_excess = 0.0;  // max of dV/dt - (-gamma V + sigma) - tol
    double worst_time = 0.0;
    double tolerance = 0.0;  // absolute slack actually used
    double max_v = 0.0;

    [[nodiscard]] double satisfied_fraction() const noexcept {
        return interior_samples == 0
                   ? 1.0
                   : 1.0 - static_cast<double>(violations) / static_cast<double>(interior_samples);
    }
    [[nodiscard]] bool holds(double min_fraction = 1.0) const noexcept {
        return satisfied_fraction() >= min_fraction;
    }
};

/// V = (x1 - phi)' P (x1 - phi); checks the central difference
/// (V[i+1] - V[i-1]) / 2h <= -gamma V[i] + sigma_bound + relative_tol * max V
/// at interior samples. Throws GridTooCoarse below 3 samples.
LyapunovReport lyapunov_decrease_check(const AugmentedRun& run, const Matrix& p,
                                       const GpsConstants& consts, double relative_tol = 0.05);

}  // namespace symabs
