#include "symabs/cli/commands.hpp"

#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "symabs/abstraction.hpp"
#include "symabs/random.hpp"
#include "symabs/verify.hpp"

namespace symabs::cli {

namespace {

using nlohmann::json;

constexpr double kGpsTol = 1e-3;
constexpr double kLyapunovRelativeTol = 0.05;
constexpr std::size_t kDeltaQcPairs = 10000;
constexpr double kDeltaQcRange = 10.0;
constexpr std::uint64_t kDeltaQcStream = 0xD5C0FFEEULL;

json box_json(const BoxInputSet& box) {
    if (box.is_all_space()) return "all";
    return json{{"lower", box.lower()}, {"upper", box.upper()}};
}

json constants_json(const ExperimentPlan& plan) {
    const GpsConstants& c = plan.constants;
    return json{{"a", c.a},
                {"k", c.k},
                {"lambda_min_P", c.lambda_min},
                {"lambda_max_P", c.lambda_max},
                {"lhat_norm", c.lhat_norm},
                {"K1", c.k1},
                {"beta_coeff", c.beta_coeff},
                {"beta_rate", c.beta_rate},
                {"practical_offset", c.practical_offset},
                {"gamma", c.gamma},
                {"sigma_bound", c.sigma_bound},
                {"omega_bound", c.omega_bound},
                {"gap_bound", (c.k1 + 1.0) * plan.eta},
                {"margin_r", plan.margin},
                {"U_prime", box_json(plan.shrunk_inputs)},
                {"abstract_inputs", box_json(plan.abstract_inputs)}};
}

json eta_json(const ExperimentPlan& plan) {
    return json{{"theorem", plan.theorem},
                {"eta", plan.eta},
                {"eta_bound", plan.eta_bound},
                {"auto", plan.eta_auto},
                {"within_bound", plan.eta <= plan.eta_bound}};
}

std::string certified_label(const ExperimentPlan& plan) {
    const bool within = plan.eta <= plan.eta_bound;
    return fmt::format("theorem {} eta condition {} (eta = {:.6g}, bound = {:.6g})", plan.theorem,
                       within ? "satisfied" : "NOT satisfied", plan.eta, plan.eta_bound);
}

std::string file_stem(const ExperimentConfig& cfg) {
    return cfg.name.empty() ? std::string("experiment") : cfg.name;
}

std::filesystem::path write_file(const RunOptions& opts, const std::string& filename,
                                 const std::string& content) {
    std::filesystem::create_directories(opts.out_dir);
    const auto path = opts.out_dir / filename;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::BadRange, "cannot write " + path.string());
    out << content;
    return path;
}

RelationTrialSpec trial_spec(const ExperimentConfig& cfg, const ExperimentPlan& plan) {
    RelationTrialSpec spec;
    spec.initial_box = cfg.initial_box;
    spec.abstract_inputs = plan.abstract_inputs;
    spec.inputs = cfg.input_set;
    spec.dwell = cfg.dwell;
    spec.horizon = cfg.horizon;
    spec.step = cfg.step;
    spec.trials = cfg.trials;
    spec.seed = cfg.seed;
    return spec;
}

json lmi_json(const LmiVerdict& v, double tol) {
    return json{{"holds", v.holds},
                {"lambda_max", v.max_eig},
                {"tolerance", tol},
                {"eigenvalues", symmetric_eigenvalues(v.assembled, tol)}};
}

json alpha_search_json(const std::function<bool(double)>& feasible, double hi) {
    try {
        const AlphaSearch s = max_feasible_alpha(feasible, hi);
        return json{{"max_feasible_alpha", s.alpha},
                    {"search_upper", hi},
                    {"limited_by_search_range", s.feasible_at_hi}};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::Infeasible) throw;
        return json{{"max_feasible_alpha", nullptr}, {"search_upper", hi}};
    }
}

CommandResult certify(const ExperimentConfig& cfg) {
    CommandResult res;
    const double tol = cfg.tol;
    const Matrix& p = cfg.certificate.p;
    const double alpha = cfg.certificate.alpha;

    try {
        require_positive_definite(p, tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NotPositiveDefinite) throw;
        res.report = {{"verdict", "fail"}, {"reason", e.what()}};
        res.summary = fmt::format("certificate rejected: {}\n", e.what());
        res.exit_code = kExitVerdictFail;
        return res;
    }

    bool pass = false;
    if (cfg.system.family == SystemFamily::Sine) {
        const Matrix& a = cfg.system.a;
        SineCertificate cert{p, cfg.certificate.gain, alpha, cfg.system.m_gain};
        const LmiVerdict lmi = check_lmi_sine(cert, a, tol);
        pass = lmi.holds;

        // Schur complement of the -I block: top-left + P P.
        const std::size_t n = a.rows();
        Matrix schur(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) schur(i, j) = lmi.assembled(i, j);
        schur += p * p;

        auto feasible = [&](double al) {
            SineCertificate c = cert;
            c.alpha = al;
            return check_lmi_sine(c, a, tol).holds;
        };
        res.report["lmi"] = lmi_json(lmi, tol);
        res.report["lmi"]["schur_complement_eigenvalues"] = symmetric_eigenvalues(schur, tol);
        res.report["alpha_search"] = alpha_search_json(feasible, pass ? 4.0 * alpha : alpha);
    } else {
        const auto sys = std::get<IqcSystem>(build_system(cfg.system));
        const Matrix m = cfg.certificate.lipschitz
                             ? lipschitz_delta_mm(*cfg.certificate.lipschitz, sys.cq().rows(),
                                                  sys.e().cols())
                             : cfg.certificate.multiplier;
        IqcCertificate cert{p, cfg.certificate.gain, alpha, m};
        const LmiVerdict lmi = check_lmi_iqc(cert, sys, tol);

        CounterRng rng(cfg.seed, kDeltaQcStream);
        std::vector<std::pair<Vector, Vector>> pairs(kDeltaQcPairs);
        for (auto& [q1, q2] : pairs) {
            q1.resize(sys.p().in_dim);
            q2.resize(sys.p().in_dim);
            for (double& v : q1) v = rng.uniform(-kDeltaQcRange, kDeltaQcRange);
            for (double& v : q2) v = rng.uniform(-kDeltaQcRange, kDeltaQcRange);
        }
        const DeltaQcVerdict dqc = delta_qc_sample_check(sys.p(), m, pairs, tol);
        pass = lmi.holds && dqc.holds;

        auto feasible = [&](double al) {
            IqcCertificate c = cert;
            c.alpha = al;
            return check_lmi_iqc(c, sys, tol).holds;
        };
        res.report["lmi"] = lmi_json(lmi, tol);
        res.report["delta_qc"] = {{"holds", dqc.holds},
                                  {"pairs_checked", dqc.pairs_checked},
                                  {"min_form", dqc.min_form}};
        if (dqc.witness) {
            res.report["delta_qc"]["witness"] = {{"q1", dqc.witness->q1},
                                                 {"q2", dqc.witness->q2},
                                                 {"form", dqc.witness->form}};
        }
        res.report["alpha_search"] = alpha_search_json(feasible, lmi.holds ? 4.0 * alpha : alpha);
    }

    res.report["alpha"] = alpha;
    res.report["verdict"] = pass ? "pass" : "fail";
    const json& lmi = res.report["lmi"];
    res.summary = fmt::format("LMI at alpha = {}: {} (lambda_max = {:.6g})\n", alpha,
                              pass ? "feasible" : "infeasible", lmi["lambda_max"].get<double>());
    const json& best = res.report["alpha_search"]["max_feasible_alpha"];
    if (best.is_null())
        res.summary += "no feasible alpha in the search range\n";
    else
        res.summary += fmt::format("largest feasible alpha (P and gain fixed): {:.9g}\n", best.get<double>());
    res.exit_code = pass ? kExitPass : kExitVerdictFail;
    return res;
}

CommandResult eta_bound(const ExperimentConfig& cfg) {
    CommandResult res;
    json bounds;
    for (EtaTheorem th : {2, 3, 4}) {
        try {
            bounds[std::to_string(th)] = eta_bound_for(cfg, th);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Infeasible) throw;
            bounds[std::to_string(th)] = nullptr;
        }
    }
    const json& selected = bounds[std::to_string(cfg.theorem)];
    res.report["bounds"] = bounds;
    res.report["theorem"] = cfg.theorem;
    res.report["eta_bound"] = selected;
    if (cfg.eta) res.report["eta"] = *cfg.eta;

    if (selected.is_null()) {
        res.summary = fmt::format("theorem {}: no admissible eta\n", cfg.theorem);
        res.report["verdict"] = "fail";
        res.exit_code = kExitVerdictFail;
        return res;
    }
    const double bound = selected.get<double>();
    const bool ok = !cfg.eta || *cfg.eta <= bound;
    res.summary = fmt::format("eta_bound (theorem {}) = {:.10g}\n", cfg.theorem, bound);
    if (cfg.eta)
        res.summary += fmt::format("configured eta = {} {} the bound\n", *cfg.eta, ok ? "satisfies" : "violates");
    res.report["verdict"] = ok ? "pass" : "fail";
    res.exit_code = ok ? kExitPass : kExitVerdictFail;
    return res;
}

CommandResult shrink_input_set(const ExperimentConfig& cfg) {
    CommandResult res;
    try {
        const ExperimentPlan plan = make_plan(cfg);
        res.report["eta"] = eta_json(plan);
        res.report["constants"] = constants_json(plan);
        res.report["U"] = box_json(cfg.input_set);
        res.report["verdict"] = "pass";
        res.summary = fmt::format("margin r = {:.10g}\nU' = {}\n", plan.margin,
                                  box_json(plan.shrunk_inputs).dump());
    } catch (const Error& e) {
        if (e.code() != ErrorCode::EmptyResult) throw;
        res.report = {{"verdict", "fail"}, {"reason", e.what()}};
        res.summary = fmt::format("{}\n", e.what());
        res.exit_code = kExitVerdictFail;
    }
    return res;
}

json lyapunov_json(const LyapunovReport& l) {
    return json{{"interior_samples", l.interior_samples},
                {"violations", l.violations},
                {"satisfied_fraction", l.satisfied_fraction()},
                {"worst_excess", l.worst_excess},
                {"worst_time", l.worst_time},
                {"tolerance", l.tolerance}};
}

json gps_json(const GpsReport& g) {
    return json{{"pass", g.pass},
                {"worst_margin", g.worst_margin},
                {"worst_time", g.worst_time},
                {"beta_coeff", g.beta_coeff},
                {"beta_rate", g.beta_rate},
                {"practical_offset", g.practical_offset}};
}

double max_state_gap(const AugmentedRun& run) {
    double gap = 0.0;
    for (std::size_t i = 0; i < run.size(); ++i)
        gap = std::max(gap, norm(subtract(run.x1_states[i], run.x2_states[i])));
    return gap;
}

CommandResult simulate(const ExperimentConfig& cfg, const RunOptions& opts) {
    CommandResult res;
    const ExperimentPlan plan = make_plan(cfg);
    const LatticeParams params(state_dim(plan.system), plan.eta);
    const TrialInputs inputs = draw_trial(trial_spec(cfg, plan), 0);
    const AugmentedRun run = simulate_augmented(plan.system, plan.interface, inputs.x1_0, inputs.v,
                                                params, cfg.horizon, cfg.step, cfg.input_set);

    const CloseVerdict close = eps_close(concrete_outputs(plan.system, run),
                                         abstract_outputs(plan.system, run), plan.precision.epsilon);
    const GpsReport gps = verify_gps_trajectory(run, plan.constants, kGpsTol);
    json lyap = nullptr;
    if (run.size() >= 3)
        lyap = lyapunov_json(lyapunov_decrease_check(run, plan.p, plan.constants, kLyapunovRelativeTol));

    const std::string stem = file_stem(cfg);
    res.written.push_back(write_file(opts, stem + ".trajectory.csv", trajectory_csv(run)));

    res.report["eta"] = eta_json(plan);
    res.report["constants"] = constants_json(plan);
    res.report["seed"] = cfg.seed;
    res.report["x1_0"] = inputs.x1_0;
    res.report["samples"] = run.size();
    res.report["max_y_err"] = close.max_gap;
    res.report["argmax_time"] = close.argmax_time;
    res.report["epsilon"] = plan.precision.epsilon;
    res.report["max_state_gap"] = max_state_gap(run);
    res.report["gps"] = gps_json(gps);
    res.report["lyapunov"] = lyap;
    res.report["verdict"] = close.holds ? "pass" : "fail";

    res.summary = fmt::format("max |y1 - y2| = {:.6g} at t = {:.6g} (epsilon = {})\n", close.max_gap,
                              close.argmax_time, plan.precision.epsilon);
    res.exit_code = close.holds ? kExitPass : kExitVerdictFail;
    return res;
}

CommandResult verify(const ExperimentConfig& cfg) {
    CommandResult res;
    const ExperimentPlan plan = make_plan(cfg);
    const LatticeParams params(state_dim(plan.system), plan.eta);

    bool gps_all = true;
    double gps_worst = std::numeric_limits<double>::infinity();
    double lyap_min_fraction = 1.0;
    double gap_max = 0.0;
    json per_trial_extra = json::array();
    auto observer = [&](std::size_t k, const AugmentedRun& run) {
        const GpsReport gps = verify_gps_trajectory(run, plan.constants, kGpsTol);
        gps_all = gps_all && gps.pass;
        gps_worst = std::min(gps_worst, gps.worst_margin);
        json extra = {{"trial", k}, {"gps_worst_margin", gps.worst_margin}};
        if (run.size() >= 3) {
            const LyapunovReport l =
                lyapunov_decrease_check(run, plan.p, plan.constants, kLyapunovRelativeTol);
            lyap_min_fraction = std::min(lyap_min_fraction, l.satisfied_fraction());
            extra["lyapunov_satisfied_fraction"] = l.satisfied_fraction();
        }
        const double gap = max_state_gap(run);
        gap_max = std::max(gap_max, gap);
        extra["max_state_gap"] = gap;
        per_trial_extra.push_back(std::move(extra));
    };

    const RelationReport rel = verify_simulation_relation(
        plan.system, plan.interface, params, plan.precision, trial_spec(cfg, plan),
        certified_label(plan), observer);

    json trials = json::array();
    for (std::size_t k = 0; k < rel.per_trial.size(); ++k) {
        const TrialResult& t = rel.per_trial[k];
        trials.push_back({{"trial", k},
                          {"status", t.status == TrialStatus::Ok ? "ok" : "input_violation"},
                          {"max_err", t.max_err},
                          {"argmax_time", t.argmax_time}});
    }
    res.report["eta"] = eta_json(plan);
    res.report["constants"] = constants_json(plan);
    res.report["relation"] = {{"pass", rel.pass},
                              {"max_err", rel.max_err},
                              {"argmax_time", rel.argmax_time},
                              {"trials", rel.trials},
                              {"seed", rel.seed},
                              {"epsilon", plan.precision.epsilon},
                              {"per_trial", trials},
                              {"certified_by", rel.certified_by}};
    res.report["gps"] = {{"all_pass", gps_all},
                         {"worst_margin", per_trial_extra.empty() ? json(nullptr) : json(gps_worst)}};
    res.report["lyapunov_min_satisfied_fraction"] = lyap_min_fraction;
    res.report["max_state_gap"] = gap_max;
    res.report["per_trial_checks"] = per_trial_extra;
    const bool certified = plan.eta <= plan.eta_bound;
    std::string label = "counterexample found";
    if (rel.pass && certified)
        label = fmt::format("certified by theorem {} + empirically consistent", plan.theorem);
    else if (rel.pass)
        label = "empirically consistent (eta outside the certified bound)";
    res.report["label"] = label;
    res.report["verdict"] = rel.pass ? "pass" : "fail";

    res.summary = fmt::format("{} trials (seed {}): max |y1 - y2| = {:.6g} (epsilon = {}) -> {}\n",
                              rel.trials, rel.seed, rel.max_err, plan.precision.epsilon,
                              rel.pass ? "PASS" : "FAIL");
    res.summary += fmt::format("{}\n", rel.certified_by);
    res.exit_code = rel.pass ? kExitPass : kExitVerdictFail;
    return res;
}

void append_row(std::string& out, double t, const AugmentedRun& run, std::size_t i) {
    out += fmt::format("{:.17g}", t);
    for (const auto* series : {&run.x1_states, &run.phi_states, &run.x2_states, &run.u_values,
                               &run.v_values})
        for (double v : (*series)[i]) out += fmt::format(",{:.17g}", v);
    out += fmt::format(",{:.17g}\n", run.y_err[i]);
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
    if (name == "certify") return Command::Certify;
    if (name == "eta-bound") return Command::EtaBound;
    if (name == "simulate") return Command::Simulate;
    if (name == "verify") return Command::Verify;
    if (name == "shrink-input-set") return Command::ShrinkInputSet;
    return std::nullopt;
}

std::string_view command_name(Command cmd) {
    switch (cmd) {
        case Command::Certify: return "certify";
        case Command::EtaBound: return "eta-bound";
        case Command::Simulate: return "simulate";
        case Command::Verify: return "verify";
        case Command::ShrinkInputSet: return "shrink-input-set";
    }
    return "unknown";
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ParseError:
        case ErrorCode::SchemaError:
        case ErrorCode::DimensionMismatch:
        case ErrorCode::NonSquare:
        case ErrorCode::NotSymmetric:
        case ErrorCode::NonFinite:
        case ErrorCode::BadRange:
            return kExitConfigError;
        case ErrorCode::NotPositiveDefinite:
        case ErrorCode::Infeasible:
        case ErrorCode::EmptyResult:
        case ErrorCode::InputViolation:
            return kExitVerdictFail;
        default:
            return kExitRuntimeError;
    }
}

ExperimentConfig apply_overrides(ExperimentConfig cfg, const RunOptions& opts) {
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.trials) cfg.trials = *opts.trials;
    if (opts.step) cfg.step = *opts.step;
    if (opts.horizon) cfg.horizon = *opts.horizon;
    if (opts.theorem) cfg.theorem = *opts.theorem;
    if (opts.tol) cfg.tol = *opts.tol;
    return cfg;
}

std::string trajectory_csv(const AugmentedRun& run) {
    const std::size_t n = run.x1_states.empty() ? 0 : run.x1_states.front().size();
    const std::size_t m = run.u_values.empty() ? 0 : run.u_values.front().size();
    std::string out = "t";
    for (const char* prefix : {"x1_", "phi_", "x2_"})
        for (std::size_t i = 1; i <= n; ++i) out += fmt::format(",{}{}", prefix, i);
    for (const char* prefix : {"u_", "v_"})
        for (std::size_t i = 1; i <= m; ++i) out += fmt::format(",{}{}", prefix, i);
    out += ",y_err\n";
    for (std::size_t i = 0; i < run.size(); ++i) append_row(out, run.times[i], run, i);
    return out;
}

CommandResult run_command(Command cmd, const ExperimentConfig& base, const RunOptions& opts) {
    CommandResult res;
    const ExperimentConfig cfg = apply_overrides(base, opts);
    try {
        if (cfg.theorem < 2 || cfg.theorem > 4)
            throw Error(ErrorCode::BadRange, "theorem selector must be 2, 3 or 4");
        switch (cmd) {
            case Command::Certify: res = certify(cfg); break;
            case Command::EtaBound: res = eta_bound(cfg); break;
            case Command::Simulate: res = simulate(cfg, opts); break;
            case Command::Verify: res = verify(cfg); break;
            case Command::ShrinkInputSet: res = shrink_input_set(cfg); break;
        }
    } catch (const Error& e) {
        res = CommandResult{};
        res.exit_code = exit_code_for(e.code());
        res.report = {{"verdict", "error"},
                      {"error", std::string(to_string(e.code()))},
                      {"message", e.what()}};
        res.summary = fmt::format("error: {}\n", e.what());
    }
    res.report["command"] = std::string(command_name(cmd));
    res.report["config"] = cfg.name;
    res.report["exit_code"] = res.exit_code;
    const std::string stem = file_stem(cfg);
    res.written.push_back(write_file(opts, fmt::format("{}.{}.json", stem, command_name(cmd)),
                                     res.report.dump(2) + "\n"));
    return res;
}

}  // namespace symabs::cli
