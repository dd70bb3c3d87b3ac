#include "symabs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symabs/error.hpp"
#include "symabs/random.hpp"

namespace symabs {

namespace {

OutputSeries outputs_of(const SystemModel& sys, const AugmentedRun& run,
                        const std::vector<Vector>& states) {
    OutputSeries series;
    series.times = run.times;
    series.values.reserve(states.size());
    for (const Vector& x : states) series.values.push_back(output(sys, x));
    return series;
}

const BoxInputSet& require_bounded_box(const BoxInputSet& box, const char* what) {
    if (box.is_all_space())
        throw Error(ErrorCode::BadRange, std::string(what) + " must be a bounded box to sample from");
    return box;
}

}  // namespace

CloseVerdict eps_close(const OutputSeries& z1, const OutputSeries& z2, double epsilon) {
    if (z1.times != z2.times || z1.values.size() != z1.times.size() ||
        z2.values.size() != z2.times.size()) {
        throw Error(ErrorCode::GridMismatch, "output series are not on the same time grid");
    }
    CloseVerdict verdict;
    for (std::size_t i = 0; i < z1.times.size(); ++i) {
        const double gap = norm(subtract(z1.values[i], z2.values[i]));
        if (gap > verdict.max_gap) {
            verdict.max_gap = gap;
            verdict.argmax_time = z1.times[i];
        }
    }
    verdict.holds = verdict.max_gap <= epsilon;
    return verdict;
}

OutputSeries concrete_outputs(const SystemModel& sys, const AugmentedRun& run) {
    return outputs_of(sys, run, run.x1_states);
}

OutputSeries abstract_outputs(const SystemModel& sys, const AugmentedRun& run) {
    return outputs_of(sys, run, run.x2_states);
}

TrialInputs draw_trial(const RelationTrialSpec& spec, std::size_t k) {
    const BoxInputSet& init = require_bounded_box(spec.initial_box, "initial-state box");
    const BoxInputSet& vbox = require_bounded_box(spec.abstract_inputs, "abstract input set");
    if (!(spec.dwell > 0.0)) throw Error(ErrorCode::BadRange, "dwell time must be positive");
    if (!(spec.horizon >= 0.0)) throw Error(ErrorCode::BadRange, "horizon must be non-negative");

    CounterRng rng(spec.seed, k);
    Vector x1_0(init.lower().size());
    for (std::size_t i = 0; i < x1_0.size(); ++i)
        x1_0[i] = rng.uniform(init.lower()[i], init.upper()[i]);

    const auto segments = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(spec.horizon / spec.dwell - 1e-9)));
    std::vector<double> breakpoints(segments);
    std::vector<Vector> values(segments, Vector(vbox.lower().size()));
    for (std::size_t j = 0; j < segments; ++j) {
        breakpoints[j] = static_cast<double>(j) * spec.dwell;
        for (std::size_t i = 0; i < values[j].size(); ++i)
            values[j][i] = rng.uniform(vbox.lower()[i], vbox.upper()[i]);
    }
    const double domain_end = static_cast<double>(segments) * spec.dwell;
    return {std::move(x1_0),
            PiecewiseConstantSignal(std::move(breakpoints), std::move(values),
                                    std::max(domain_end, spec.horizon), vbox)};
}

RelationReport verify_simulation_relation(const SystemModel& sys, const AffineInterface& iface,
                                          const LatticeParams& params,
                                          const PrecisionSpec& precision,
                                          const RelationTrialSpec& spec, std::string certified_by,
                                          const TrialObserver& observer) {
    RelationReport report;
    report.trials = spec.trials;
    report.seed = spec.seed;
    report.certified_by = std::move(certified_by);
    report.per_trial.reserve(spec.trials);

    for (std::size_t k = 0; k < spec.trials; ++k) {
        const TrialInputs inputs = draw_trial(spec, k);
        TrialResult result;
        try {
            const AugmentedRun run = simulate_augmented(sys, iface, inputs.x1_0, inputs.v, params,
                                                        spec.horizon, spec.step, spec.inputs);
            const CloseVerdict close =
                eps_close(concrete_outputs(sys, run), abstract_outputs(sys, run), precision.epsilon);
            result.max_err = close.max_gap;
            result.argmax_time = close.argmax_time;
            if (observer) observer(k, run);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::InputViolation) throw;
            result.status = TrialStatus::InputViolation;
            report.pass = false;
        }
        if (k == 0 || result.max_err > report.max_err) {
            report.max_err = result.max_err;
            report.argmax_time = result.argmax_time;
        }
        report.per_trial.push_back(result);
    }
    if (report.max_err > precision.epsilon) report.pass = false;
    return report;
}

GpsReport verify_gps_trajectory(const AugmentedRun& run, const GpsConstants& consts, double tol) {
    GpsReport report;
    report.beta_coeff = consts.beta_coeff;
    report.beta_rate = consts.beta_rate;
    report.practical_offset = consts.practical_offset;
    if (run.size() == 0) return report;

    const double d0 = omega_distance({run.x1_states.front(), run.x2_states.front()});
    bool first = true;
    for (std::size_t i = 0; i < run.size(); ++i) {
        const double t = run.times[i];
        const double bound =
            consts.beta_coeff * std::exp(-consts.beta_rate * t) * d0 + consts.practical_offset;
        const double margin = bound - omega_distance({run.x1_states[i], run.x2_states[i]});
        if (first || margin < report.worst_margin) {
            report.worst_margin = margin;
            report.worst_time = t;
            first = false;
        }
    }
    report.pass = report.worst_margin >= -tol;
    return report;
}

LyapunovReport lyapunov_decrease_check(const AugmentedRun& run, const Matrix& p,
                                       const GpsConstants& consts, double relative_tol) {
    if (run.size() < 3) throw Error(ErrorCode::GridTooCoarse, "need at least 3 samples");
    if (!(run.step > 0.0)) throw Error(ErrorCode::BadRange, "run has no step size");

    std::vector<double> v(run.size());
    for (std::size_t i = 0; i < run.size(); ++i)
        v[i] = quadratic_form(p, subtract(run.x1_states[i], run.phi_states[i]));

    LyapunovReport report;
    report.max_v = *std::max_element(v.begin(), v.end());
    report.tolerance = relative_tol * report.max_v;
    report.interior_samples = run.size() - 2;
    bool first = true;
    for (std::size_t i = 1; i + 1 < run.size(); ++i) {
        const double dv = (v[i + 1] - v[i - 1]) / (2.0 * run.step);
        const double excess = dv - (-consts.gamma * v[i] + consts.sigma_bound) - report.tolerance;
        if (excess > 0.0) ++report.violations;
        if (first || excess > report.worst_excess) {
            report.worst_excess = excess;
            report.worst_time = run.times[i];
            first = false;
        }
    }
    return report;
}

}  // namespace symabs
