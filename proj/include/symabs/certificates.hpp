#pragma once

// Matrix-inequality certificates for the control interface and the
// constants derived from them: decay rates, offsets and admissible
// quantization radii.
//
// Certificates are checked, never synthesized. The only search offered is
// a bisection over the decay rate alpha with P and the gain held fixed.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "symabs/dynamics.hpp"
#include "symabs/numerics.hpp"

namespace symabs {

/// kappa(x) = coeff * x^power with coeff > 0, power >= 1. Strictly
/// increasing, zero at zero, unbounded; the inverse is subadditive.
class MonomialKInf {
public:
    /// Throws BadRange unless coeff > 0 and power >= 1 (both finite).
    MonomialKInf(double coeff, double power);

    [[nodiscard]] double coeff() const noexcept { return coeff_; }
    [[nodiscard]] double power() const noexcept { return power_; }

    /// Throws NegativeInput for x < 0.
    [[nodiscard]] double value(double x) const;
    [[nodiscard]] double inverse(double y) const;

    bool operator==(const MonomialKInf&) const = default;

private:
    double coeff_;
    double power_;
};

enum class KInfDirection { Forward, Inverse };

double kinf_eval(const MonomialKInf& f, double x, KInfDirection direction);

struct SineCertificate {
    Matrix p;
    Matrix r;
    double alpha = 0.0;
    double m_gain = 0.0;
};

struct IqcCertificate {
    Matrix p;
    Matrix l;
    double alpha = 0.0;
    Matrix multiplier;  // delta-multiplier matrix M, size (lp + le)
};

struct LmiVerdict {
    bool holds = false;
    double max_eig = 0.0;
    Matrix assembled;

    explicit operator bool() const noexcept { return holds; }
};

/// Throws NotSymmetric / NotPositiveDefinite unless lambda_min(P) > tol.
void require_positive_definite(const Matrix& p, double tol = kDefaultTol);

/// [[A'P + PA + R + R' + 2 alpha P + m^2 I, P], [P, -I]] (2R for symmetric R)
Matrix assemble_lmi_sine(const SineCertificate& cert, const Matrix& a);
LmiVerdict check_lmi_sine(const SineCertificate& cert, const Matrix& a, double tol = kDefaultTol);

/// [[P Ac + Ac' P + 2 alpha P, P E], [E' P, 0]] + N' M N with Ac = A + B L
/// and N = [[Cq, Dq], [0, I]].
Matrix assemble_lmi_iqc(const IqcCertificate& cert, const IqcSystem& sys);
LmiVerdict check_lmi_iqc(const IqcCertificate& cert, const IqcSystem& sys,
                         double tol = kDefaultTol);

struct AlphaSearch {
    double alpha = 0.0;          // largest feasible alpha found
    bool feasible_at_hi = false;  // the whole search range was feasible
};

/// Largest alpha in (0, hi] for which `feasible(alpha)` holds, assuming
/// feasibility is monotone (feasible below some threshold). Throws
/// Infeasible if even alpha = tol fails.
AlphaSearch max_feasible_alpha(const std::function<bool(double)>& feasible, double hi,
                               double tol = 1e-10);

/// multiplier for an ell-Lipschitz p: [[ell^2 I_lp, 0], [0, -I_le]].
Matrix lipschitz_delta_mm(double ell, std::size_t l_p, std::size_t l_e);

struct DeltaQcWitness {
    Vector q1;
    Vector q2;
    double form = 0.0;
};

struct DeltaQcVerdict {
    bool holds = true;
    std::size_t pairs_checked = 0;
    double min_form = 0.0;
    std::optional<DeltaQcWitness> witness;  // first violating pair

    explicit operator bool() const noexcept { return holds; }
};

/// Checks (dq, dp)' M (dq, dp) >= -tol on every pair. Throws
/// DimensionMismatch / NotSymmetric.
DeltaQcVerdict delta_qc_sample_check(const Nonlinearity& p, const Matrix& m,
                                     std::span<const std::pair<Vector, Vector>> pairs,
                                     double tol = kDefaultTol);

struct GpsConstants {
    double a = 0.0;
    double k = 0.0;           // 2 alpha - a
    double lambda_min = 0.0;  // of P
    double lambda_max = 0.0;
    double lhat_norm = 0.0;  // ||L' B' P B L||
    double k1 = 0.0;
    double beta_coeff = 0.0;  // sqrt(lambda_max / lambda_min)
    double beta_rate = 0.0;   // alpha - a/2
    double practical_offset = 0.0;
    double gamma = 0.0;
    double sigma_bound = 0.0;  // lhat_norm * eta^2 / a
    double omega_bound = 0.0;  // eta
};

/// Throws BadRange unless 0 < a < 2 alpha with 2 alpha - a >= 1e-9, and
/// NotPositiveDefinite for P.
GpsConstants gps_constants(const Matrix& p, const Matrix& b, const Matrix& l, double alpha,
                           double a, double eta);

/// Closed-form admissible quantization radius for the quadratic-Lyapunov
/// interface:
///   eta <= eps/||C|| * sqrt(ak lmin) / (sqrt(ak lmin) + sqrt(ak lmax + ||Lhat||))
double eta_bound_iqc(const Matrix& p, const Matrix& b, const Matrix& l, const Matrix& c_out,
                     double alpha, double a, double epsilon);

struct PrecisionSpec {
    double epsilon = 0.0;
    double rho = 1.0;  // output Lipschitz constant

    /// Throws BadRange unless both are finite and positive.
    void validate() const;
    bool operator==(const PrecisionSpec&) const = default;
};

/// Lyapunov function decreasing to zero: alpha_lo^-1(alpha_hi(eta)) + eta < eps/rho.
struct GasCondition {};

/// Decrease up to an offset sigma(eta) with rate gamma:
///   alpha_lo^-1(alpha_hi(eta)) + eta + alpha_lo^-1(sigma(eta)/gamma) < eps/rho
/// together with sigma(eta) < gamma alpha_lo(eps/rho).
struct GpsCondition {
    double gamma = 0.0;
    MonomialKInf sigma{1.0, 2.0};
};

using EtaCondition = std::variant<GasCondition, GpsCondition>;

/// Left-hand side of the selected condition at eta (strictly increasing).
double eta_condition_lhs(const MonomialKInf& alpha_lo, const MonomialKInf& alpha_hi,
                         const EtaCondition& mode, double eta);

/// Largest eta (to within tol) strictly satisfying the selected condition.
/// Throws Infeasible if no eta > tol qualifies.
double eta_feasible(const PrecisionSpec& spec, const MonomialKInf& alpha_lo,
                    const MonomialKInf& alpha_hi, const EtaCondition& mode, double tol = 1e-12);

}  // namespace symabs
