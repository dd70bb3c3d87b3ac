#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "symabs/input_set.hpp"
#include "symabs/numerics.hpp"

namespace symabs {

/// A static nonlinearity p : R^in -> R^out.
struct Nonlinearity {
    std::string name;
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::function<Vector(std::span<const double>)> eval;

    Vector operator()(std::span<const double> q) const;
};

/// Elementwise built-ins of dimension `dim`: "sin", "tanh", "saturation"
/// (clamp to [-1, 1]), "square" and "zero". Throws BadRange for other names.
Nonlinearity elementwise_nonlinearity(const std::string& name, std::size_t dim);

/// x' = A x + m sin(x) + u, y = x. sin acts elementwise; inputs live in R^n.
class SineSystem {
public:
    /// Throws NonSquare if A is not square.
    SineSystem(Matrix a, double m_gain);

    [[nodiscard]] const Matrix& a() const noexcept { return a_; }
    [[nodiscard]] double m_gain() const noexcept { return m_gain_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return a_.rows(); }

private:
    Matrix a_;
    double m_gain_;
};

/// x' = A x + B u + E p(Cq x + Dq p), y = C x.
///
/// When Dq is nonzero the nonlinearity argument depends on its own output;
/// the loop is resolved by fixed-point iteration and must be contractive.
class IqcSystem {
public:
    /// Throws DimensionMismatch unless the shapes chain consistently:
    /// A n x n, B n x m, C l x n, E n x le, Cq lp x n, Dq lp x le, p: lp -> le.
    IqcSystem(Matrix a, Matrix b, Matrix c, Matrix e, Matrix cq, Matrix dq, Nonlinearity p);

    [[nodiscard]] const Matrix& a() const noexcept { return a_; }
    [[nodiscard]] const Matrix& b() const noexcept { return b_; }
    [[nodiscard]] const Matrix& c() const noexcept { return c_; }
    [[nodiscard]] const Matrix& e() const noexcept { return e_; }
    [[nodiscard]] const Matrix& cq() const noexcept { return cq_; }
    [[nodiscard]] const Matrix& dq() const noexcept { return dq_; }
    [[nodiscard]] const Nonlinearity& p() const noexcept { return p_; }

    [[nodiscard]] std::size_t dimension() const noexcept { return a_.rows(); }
    [[nodiscard]] std::size_t input_dimension() const noexcept { return b_.cols(); }

    /// The value w = p(Cq x + Dq w) entering the state equation.
    [[nodiscard]] Vector nonlinear_term(std::span<const double> x) const;

private:
    Matrix a_, b_, c_, e_, cq_, dq_;
    Nonlinearity p_;
    bool has_feedthrough_;
};

using SystemModel = std::variant<SineSystem, IqcSystem>;

std::size_t state_dim(const SystemModel& sys);
std::size_t input_dim(const SystemModel& sys);
/// Output matrix: identity for the sine family, C for the iqc family.
Matrix output_matrix(const SystemModel& sys);
/// Input matrix: identity for the sine family, B for the iqc family.
Matrix input_matrix(const SystemModel& sys);
Vector output(const SystemModel& sys, std::span<const double> x);

/// f(x, u). Throws DimensionMismatch.
Vector eval_rhs(const SystemModel& sys, std::span<const double> x, std::span<const double> u);

/// Piecewise-constant signal on [0, domain_end): segment j covers
/// [breakpoints[j], breakpoints[j+1]) and carries values[j].
class PiecewiseConstantSignal {
public:
    /// Throws BadRange (breakpoints not starting at 0, not strictly
    /// increasing, or domain_end not past the last one), DimensionMismatch,
    /// or InputViolation if a value leaves `bounds`.
    PiecewiseConstantSignal(std::vector<double> breakpoints, std::vector<Vector> values,
                            double domain_end,
                            BoxInputSet bounds = BoxInputSet::all_space());

    /// One segment holding `value` on [0, domain_end).
    static PiecewiseConstantSignal constant(Vector value, double domain_end);

    [[nodiscard]] const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    [[nodiscard]] const std::vector<Vector>& values() const noexcept { return values_; }
    [[nodiscard]] double domain_end() const noexcept { return domain_end_; }
    [[nodiscard]] const BoxInputSet& bounds() const noexcept { return bounds_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return values_.front().size(); }

    /// Value on the segment containing t. Throws OutOfDomain outside [0, domain_end).
    [[nodiscard]] const Vector& at(double t) const;
    /// Value held over the grid step starting at t. Evaluated at the step
    /// midpoint so rounding in t cannot select the neighbouring segment; at or
    /// past the end of the domain it is the last segment's value.
    [[nodiscard]] const Vector& on_step(double t, double h) const;

private:
    std::vector<double> breakpoints_;
    std::vector<Vector> values_;
    double domain_end_;
    BoxInputSet bounds_;
};

Vector eval_signal(const PiecewiseConstantSignal& s, double t);

struct Trajectory {
    double step = 0.0;
    std::vector<double> times;
    std::vector<Vector> states;
};

inline constexpr double kDefaultStep = 1e-3;
inline constexpr double kDivergenceLimit = 1e12;

/// Number of steps of size h covering [0, horizon]. Throws BadRange for
/// h <= 0 or horizon < 0, MisalignedSignal if horizon is not a multiple of h.
std::size_t grid_steps(double horizon, double h);

/// Throws MisalignedSignal unless every breakpoint sits on the h-grid.
void require_aligned(const PiecewiseConstantSignal& s, double h);

/// One classical RK4 step of x' = f(x) (input held constant by the caller).
template <class F>
Vector rk4_step(F&& f, std::span<const double> x, double h) {
    const std::size_t n = x.size();
    Vector stage(n);
    const Vector k1 = f(std::span<const double>(x));
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * h * k1[i];
    const Vector k2 = f(std::span<const double>(stage));
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + 0.5 * h * k2[i];
    const Vector k3 = f(std::span<const double>(stage));
    for (std::size_t i = 0; i < n; ++i) stage[i] = x[i] + h * k3[i];
    const Vector k4 = f(std::span<const double>(stage));
    Vector next(n);
    for (std::size_t i = 0; i < n; ++i)
        next[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return next;
}

/// Throws Diverged if the state is non-finite or its norm exceeds
/// kDivergenceLimit.
void require_bounded(std::span<const double> x, double t);

/// Fixed-step RK4 solution sampled at t_i = i*h, i = 0..horizon/h.
/// Throws Diverged, MisalignedSignal, DimensionMismatch, BadRange
/// (horizon past the signal domain).
Trajectory integrate_rk4(const SystemModel& sys, std::span<const double> x0,
                         const PiecewiseConstantSignal& u, double horizon, double h = kDefaultStep);

}  // namespace symabs
