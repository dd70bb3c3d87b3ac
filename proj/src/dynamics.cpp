#include "symabs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symabs/error.hpp"

namespace symabs {

namespace {

void require_dim(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected length " +
                                                      std::to_string(want) + ", got " +
                                                      std::to_string(got));
    }
}

bool on_grid(double t, double h) {
    const double k = t / h;
    return std::abs(k - std::round(k)) <= 1e-7 * std::max(1.0, std::abs(k));
}

template <class Op>
Nonlinearity make_elementwise(std::string name, std::size_t dim, Op op) {
    return Nonlinearity{std::move(name), dim, dim, [op](std::span<const double> q) {
                            Vector out(q.size());
                            std::transform(q.begin(), q.end(), out.begin(), op);
                            return out;
                        }};
}

}  // namespace

Vector Nonlinearity::operator()(std::span<const double> q) const {
    require_dim(q.size(), in_dim, "nonlinearity argument");
    Vector out = eval(q);
    require_dim(out.size(), out_dim, "nonlinearity value");
    return out;
}

Nonlinearity elementwise_nonlinearity(const std::string& name, std::size_t dim) {
    if (name == "sin") return make_elementwise(name, dim, [](double v) { return std::sin(v); });
    if (name == "tanh") return make_elementwise(name, dim, [](double v) { return std::tanh(v); });
    if (name == "saturation")
        return make_elementwise(name, dim, [](double v) { return std::clamp(v, -1.0, 1.0); });
    if (name == "square") return make_elementwise(name, dim, [](double v) { return v * v; });
    if (name == "zero") return make_elementwise(name, dim, [](double) { return 0.0; });
    throw Error(ErrorCode::BadRange, "unknown nonlinearity '" + name + "'");
}

SineSystem::SineSystem(Matrix a, double m_gain) : a_(std::move(a)), m_gain_(m_gain) {
    if (!a_.is_square() || a_.rows() == 0)
        throw Error(ErrorCode::NonSquare, "sine system matrix A must be square and non-empty");
    if (!std::isfinite(m_gain_)) throw Error(ErrorCode::NonFinite, "sine gain m is not finite");
}

IqcSystem::IqcSystem(Matrix a, Matrix b, Matrix c, Matrix e, Matrix cq, Matrix dq, Nonlinearity p)
    : a_(std::move(a)),
      b_(std::move(b)),
      c_(std::move(c)),
      e_(std::move(e)),
      cq_(std::move(cq)),
      dq_(std::move(dq)),
      p_(std::move(p)) {
    if (!a_.is_square() || a_.rows() == 0) throw Error(ErrorCode::NonSquare, "A must be square");
    const std::size_t n = a_.rows();
    require_dim(b_.rows(), n, "B rows");
    require_dim(c_.cols(), n, "C cols");
    require_dim(e_.rows(), n, "E rows");
    require_dim(cq_.cols(), n, "Cq cols");
    require_dim(dq_.rows(), cq_.rows(), "Dq rows");
    require_dim(dq_.cols(), e_.cols(), "Dq cols");
    require_dim(p_.in_dim, cq_.rows(), "nonlinearity input dimension");
    require_dim(p_.out_dim, e_.cols(), "nonlinearity output dimension");
    if (!p_.eval) throw Error(ErrorCode::BadRange, "nonlinearity has no evaluator");
    has_feedthrough_ = std::any_of(dq_.data().begin(), dq_.data().end(),
                                   [](double v) { return v != 0.0; });
}

Vector IqcSystem::nonlinear_term(std::span<const double> x) const {
    const Vector base = cq_ * x;
    if (!has_feedthrough_) return p_(base);

    constexpr int kMaxIterations = 200;
    Vector w(e_.cols(), 0.0);
    for (int it = 0; it < kMaxIterations; ++it) {
        Vector next = p_(add(base, dq_ * w));
        const double change = norm(subtract(next, w));
        w = std::move(next);
        if (change <= 1e-14 * (1.0 + norm(w))) return w;
    }
    throw Error(ErrorCode::NotConverged, "implicit nonlinearity loop did not converge");
}

std::size_t state_dim(const SystemModel& sys) {
    return std::visit([](const auto& s) { return s.dimension(); }, sys);
}

std::size_t input_dim(const SystemModel& sys) {
    if (const auto* iqc = std::get_if<IqcSystem>(&sys)) return iqc->input_dimension();
    return std::get<SineSystem>(sys).dimension();
}

Matrix output_matrix(const SystemModel& sys) {
    if (const auto* iqc = std::get_if<IqcSystem>(&sys)) return iqc->c();
    return Matrix::identity(state_dim(sys));
}

Matrix input_matrix(const SystemModel& sys) {
    if (const auto* iqc = std::get_if<IqcSystem>(&sys)) return iqc->b();
    return Matrix::identity(state_dim(sys));
}

Vector output(const SystemModel& sys, std::span<const double> x) {
    require_dim(x.size(), state_dim(sys), "state");
    if (const auto* iqc = std::get_if<IqcSystem>(&sys)) return iqc->c() * x;
    return Vector(x.begin(), x.end());
}

Vector eval_rhs(const SystemModel& sys, std::span<const double> x, std::span<const double> u) {
    require_dim(x.size(), state_dim(sys), "state");
    require_dim(u.size(), input_dim(sys), "input");
    if (const auto* sine = std::get_if<SineSystem>(&sys)) {
        Vector dx = sine->a() * x;
        for (std::size_t i = 0; i < dx.size(); ++i)
            dx[i] += sine->m_gain() * std::sin(x[i]) + u[i];
        return dx;
    }
    const auto& iqc = std::get<IqcSystem>(sys);
    Vector dx = add(iqc.a() * x, iqc.b() * u);
    const Vector w = iqc.nonlinear_term(x);
    const Vector ew = iqc.e() * w;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] += ew[i];
    return dx;
}

PiecewiseConstantSignal::PiecewiseConstantSignal(std::vector<double> breakpoints,
                                                 std::vector<Vector> values, double domain_end,
                                                 BoxInputSet bounds)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      domain_end_(domain_end),
      bounds_(std::move(bounds)) {
    if (breakpoints_.empty() || breakpoints_.front() != 0.0)
        throw Error(ErrorCode::BadRange, "signal breakpoints must start at 0");
    if (values_.size() != breakpoints_.size())
        throw Error(ErrorCode::DimensionMismatch, "one value per signal segment required");
    for (std::size_t j = 1; j < breakpoints_.size(); ++j)
        if (!(breakpoints_[j] > breakpoints_[j - 1]))
            throw Error(ErrorCode::BadRange, "signal breakpoints must be strictly increasing");
    if (!(domain_end_ > breakpoints_.back()) || !std::isfinite(domain_end_))
        throw Error(ErrorCode::BadRange, "signal domain must extend past the last breakpoint");
    const std::size_t m = values_.front().size();
    for (const Vector& v : values_) {
        require_dim(v.size(), m, "signal value");
        if (!std::all_of(v.begin(), v.end(), [](double e) { return std::isfinite(e); }))
            throw Error(ErrorCode::NonFinite, "signal value is not finite");
        if (!bounds_.contains(v)) throw Error(ErrorCode::InputViolation, "signal value outside its box");
    }
}

PiecewiseConstantSignal PiecewiseConstantSignal::constant(Vector value, double domain_end) {
    return PiecewiseConstantSignal({0.0}, {std::move(value)}, domain_end);
}

const Vector& PiecewiseConstantSignal::at(double t) const {
    if (!(t >= 0.0) || !(t < domain_end_)) {
        throw Error(ErrorCode::OutOfDomain, "t = " + std::to_string(t) + " outside [0, " +
                                                std::to_string(domain_end_) + ")");
    }
    // Last breakpoint <= t.
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

const Vector& PiecewiseConstantSignal::on_step(double t, double h) const {
    const double mid = t + 0.5 * h;
    if (mid >= domain_end_) return values_.back();
    return at(mid);
}

Vector eval_signal(const PiecewiseConstantSignal& s, double t) { return s.at(t); }

std::size_t grid_steps(double horizon, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::BadRange, "step must be positive");
    if (!(horizon >= 0.0) || !std::isfinite(horizon))
        throw Error(ErrorCode::BadRange, "horizon must be non-negative");
    if (!on_grid(horizon, h))
        throw Error(ErrorCode::MisalignedSignal, "horizon is not a multiple of the step");
    return static_cast<std::size_t>(std::llround(horizon / h));
}

void require_aligned(const PiecewiseConstantSignal& s, double h) {
    for (double b : s.breakpoints())
        if (!on_grid(b, h))
            throw Error(ErrorCode::MisalignedSignal,
                        "breakpoint " + std::to_string(b) + " is off the step grid");
}

void require_bounded(std::span<const double> x, double t) {
    const double size = norm(x);
    if (!std::isfinite(size) || size > kDivergenceLimit)
        throw Error(ErrorCode::Diverged, "state norm exceeded limit at t = " + std::to_string(t));
}

Trajectory integrate_rk4(const SystemModel& sys, std::span<const double> x0,
                         const PiecewiseConstantSignal& u, double horizon, double h) {
    require_dim(x0.size(), state_dim(sys), "initial state");
    require_dim(u.dimension(), input_dim(sys), "input signal");
    const std::size_t steps = grid_steps(horizon, h);
    if (horizon > u.domain_end())
        throw Error(ErrorCode::BadRange, "horizon extends past the input signal's domain");
    require_aligned(u, h);
    require_bounded(x0, 0.0);

    Trajectory traj;
    traj.step = h;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.times.push_back(0.0);
    traj.states.emplace_back(x0.begin(), x0.end());

    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * h;
        const Vector& ui = u.on_step(t, h);
        Vector next = rk4_step([&](std::span<const double> x) { return eval_rhs(sys, x, ui); },
                               traj.states.back(), h);
        const double t_next = static_cast<double>(i + 1) * h;
        require_bounded(next, t_next);
        traj.times.push_back(t_next);
        traj.states.push_back(std::move(next));
    }
    return traj;
}

}  // namespace symabs
