#include "symabs/certificates.hpp"

#include <cmath>
#include <string>

#include "symabs/error.hpp"

namespace symabs {

namespace {

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
    if (m.rows() != rows || m.cols() != cols) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + " must be " + std::to_string(rows) + "x" +
                        std::to_string(cols) + ", got " + std::to_string(m.rows()) + "x" +
                        std::to_string(m.cols()));
    }
}

LmiVerdict verdict_for(Matrix assembled, double tol) {
    const NsdVerdict nsd = nsd_check(assembled, tol);
    return {nsd.holds, nsd.max_eig, std::move(assembled)};
}

double lhat_norm_of(const Matrix& p, const Matrix& b, const Matrix& l) {
    const Matrix bl = b * l;
    return spectral_norm(bl.transpose() * p * bl);
}

void require_a_in_range(double alpha, double a) {
    if (!(alpha > 0.0)) throw Error(ErrorCode::BadRange, "alpha must be positive");
    if (!(a > 0.0) || !(a < 2.0 * alpha) || 2.0 * alpha - a < 1e-9) {
        throw Error(ErrorCode::BadRange, "a = " + std::to_string(a) + " outside (0, 2*alpha) = (0, " +
                                             std::to_string(2.0 * alpha) + ")");
    }
}

}  // namespace

MonomialKInf::MonomialKInf(double coeff, double power) : coeff_(coeff), power_(power) {
    if (!std::isfinite(coeff) || coeff <= 0.0)
        throw Error(ErrorCode::BadRange, "K-infinity coefficient must be positive");
    if (!std::isfinite(power) || power < 1.0)
        throw Error(ErrorCode::BadRange, "K-infinity power must be >= 1");
}

double MonomialKInf::value(double x) const {
    if (x < 0.0) throw Error(ErrorCode::NegativeInput, "K-infinity argument must be >= 0");
    return coeff_ * std::pow(x, power_);
}

double MonomialKInf::inverse(double y) const {
    if (y < 0.0) throw Error(ErrorCode::NegativeInput, "K-infinity argument must be >= 0");
    return std::pow(y / coeff_, 1.0 / power_);
}

double kinf_eval(const MonomialKInf& f, double x, KInfDirection direction) {
    return direction == KInfDirection::Forward ? f.value(x) : f.inverse(x);
}

void require_positive_definite(const Matrix& p, double tol) {
    const EigenExtremes ext = eig_extremes(p, tol);
    if (!(ext.lambda_min > tol)) {
        throw Error(ErrorCode::NotPositiveDefinite,
                    "lambda_min(P) = " + std::to_string(ext.lambda_min));
    }
}

Matrix assemble_lmi_sine(const SineCertificate& cert, const Matrix& a) {
    if (!a.is_square()) throw Error(ErrorCode::NonSquare, "A must be square");
    const std::size_t n = a.rows();
    require_shape(cert.p, n, n, "P");
    require_shape(cert.r, n, n, "R");

    Matrix top_left = a.transpose() * cert.p + cert.p * a + cert.r + cert.r.transpose() +
                      2.0 * cert.alpha * cert.p +
                      (cert.m_gain * cert.m_gain) * Matrix::identity(n);
    Matrix out(2 * n, 2 * n);
    out.set_block(0, 0, top_left);
    out.set_block(0, n, cert.p);
    out.set_block(n, 0, cert.p);
    out.set_block(n, n, -1.0 * Matrix::identity(n));
    return out;
}

LmiVerdict check_lmi_sine(const SineCertificate& cert, const Matrix& a, double tol) {
    require_positive_definite(cert.p, tol);
    return verdict_for(assemble_lmi_sine(cert, a), tol);
}

Matrix assemble_lmi_iqc(const IqcCertificate& cert, const IqcSystem& sys) {
    const std::size_t n = sys.dimension();
    const std::size_t m = sys.input_dimension();
    const std::size_t le = sys.e().cols();
    const std::size_t lp = sys.cq().rows();
    require_shape(cert.p, n, n, "P");
    require_shape(cert.l, m, n, "L");
    require_shape(cert.multiplier, lp + le, lp + le, "M");

    const Matrix ac = sys.a() + sys.b() * cert.l;
    const Matrix pe = cert.p * sys.e();
    Matrix base(n + le, n + le);
    base.set_block(0, 0, cert.p * ac + ac.transpose() * cert.p + 2.0 * cert.alpha * cert.p);
    base.set_block(0, n, pe);
    base.set_block(n, 0, pe.transpose());

    Matrix stack(lp + le, n + le);
    stack.set_block(0, 0, sys.cq());
    stack.set_block(0, n, sys.dq());
    stack.set_block(lp, n, Matrix::identity(le));
    return base + stack.transpose() * cert.multiplier * stack;
}

LmiVerdict check_lmi_iqc(const IqcCertificate& cert, const IqcSystem& sys, double tol) {
    require_positive_definite(cert.p, tol);
    if (cert.multiplier.asymmetry() > tol)
        throw Error(ErrorCode::NotSymmetric, "multiplier matrix M is not symmetric");
    return verdict_for(assemble_lmi_iqc(cert, sys), tol);
}

AlphaSearch max_feasible_alpha(const std::function<bool(double)>& feasible, double hi, double tol) {
    if (!(hi > 0.0) || !(tol > 0.0)) throw Error(ErrorCode::BadRange, "alpha search needs hi > 0, tol > 0");
    if (feasible(hi)) return {hi, true};
    double lo = std::min(tol, hi);
    if (!feasible(lo)) throw Error(ErrorCode::Infeasible, "infeasible for every alpha in the search range");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return {lo, false};
}

Matrix lipschitz_delta_mm(double ell, std::size_t l_p, std::size_t l_e) {
    if (!(ell > 0.0) || !std::isfinite(ell))
        throw Error(ErrorCode::BadRange, "Lipschitz constant must be positive");
    Matrix m(l_p + l_e, l_p + l_e);
    for (std::size_t i = 0; i < l_p; ++i) m(i, i) = ell * ell;
    for (std::size_t i = 0; i < l_e; ++i) m(l_p + i, l_p + i) = -1.0;
    return m;
}

DeltaQcVerdict delta_qc_sample_check(const Nonlinearity& p, const Matrix& m,
                                     std::span<const std::pair<Vector, Vector>> pairs, double tol) {
    require_shape(m, p.in_dim + p.out_dim, p.in_dim + p.out_dim, "delta-multiplier M");
    if (m.asymmetry() > tol) throw Error(ErrorCode::NotSymmetric, "multiplier matrix M is not symmetric");

    DeltaQcVerdict verdict;
    bool first = true;
    Vector stacked(p.in_dim + p.out_dim);
    for (const auto& [q1, q2] : pairs) {
        const Vector dq = subtract(q2, q1);
        const Vector dp = subtract(p(q2), p(q1));
        std::copy(dq.begin(), dq.end(), stacked.begin());
        std::copy(dp.begin(), dp.end(), stacked.begin() + static_cast<std::ptrdiff_t>(dq.size()));
        const double form = quadratic_form(m, stacked);
        ++verdict.pairs_checked;
        if (first || form < verdict.min_form) verdict.min_form = form;
        first = false;
        if (form < -tol && !verdict.witness) {
            verdict.holds = false;
            verdict.witness = DeltaQcWitness{q1, q2, form};
        }
    }
    return verdict;
}

GpsConstants gps_constants(const Matrix& p, const Matrix& b, const Matrix& l, double alpha,
                           double a, double eta) {
    require_a_in_range(alpha, a);
    if (!(eta >= 0.0)) throw Error(ErrorCode::BadRange, "eta must be non-negative");
    require_positive_definite(p);
    const EigenExtremes ext = eig_extremes(p);

    GpsConstants c;
    c.a = a;
    c.k = 2.0 * alpha - a;
    c.lambda_min = ext.lambda_min;
    c.lambda_max = ext.lambda_max;
    c.lhat_norm = lhat_norm_of(p, b, l);
    const double offset_gain = c.lhat_norm / (a * c.k * ext.lambda_min);
    c.k1 = std::sqrt(ext.lambda_max / ext.lambda_min + offset_gain);
    c.beta_coeff = std::sqrt(ext.lambda_max / ext.lambda_min);
    c.beta_rate = alpha - 0.5 * a;
    c.practical_offset = (std::sqrt(offset_gain) + 1.0) * eta;
    c.gamma = c.k;
    c.sigma_bound = c.lhat_norm * eta * eta / a;
    c.omega_bound = eta;
    return c;
}

double eta_bound_iqc(const Matrix& p, const Matrix& b, const Matrix& l, const Matrix& c_out,
                     double alpha, double a, double epsilon) {
    require_a_in_range(alpha, a);
    require_positive_definite(p);
    const EigenExtremes ext = eig_extremes(p);
    const double ak = a * (2.0 * alpha - a);
    const double lhat = lhat_norm_of(p, b, l);
    const double c_norm = spectral_norm(c_out);
    if (!(c_norm > 0.0)) throw Error(ErrorCode::BadRange, "output matrix is zero");
    const double inner = std::sqrt(ak * ext.lambda_min);
    return epsilon / c_norm * inner / (inner + std::sqrt(ak * ext.lambda_max + lhat));
}

void PrecisionSpec::validate() const {
    if (!std::isfinite(epsilon) || epsilon <= 0.0)
        throw Error(ErrorCode::BadRange, "precision epsilon must be positive");
    if (!std::isfinite(rho) || rho <= 0.0)
        throw Error(ErrorCode::BadRange, "output Lipschitz constant rho must be positive");
}

double eta_condition_lhs(const MonomialKInf& alpha_lo, const MonomialKInf& alpha_hi,
                         const EtaCondition& mode, double eta) {
    double lhs = alpha_lo.inverse(alpha_hi.value(eta)) + eta;
    if (const auto* gps = std::get_if<GpsCondition>(&mode))
        lhs += alpha_lo.inverse(gps->sigma.value(eta) / gps->gamma);
    return lhs;
}

double eta_feasible(const PrecisionSpec& spec, const MonomialKInf& alpha_lo,
                    const MonomialKInf& alpha_hi, const EtaCondition& mode, double tol) {
    if (!(tol > 0.0)) throw Error(ErrorCode::BadRange, "tolerance must be positive");
    if (!(spec.rho > 0.0)) throw Error(ErrorCode::BadRange, "rho must be positive");
    const double target = spec.epsilon / spec.rho;
    if (!(target > 0.0)) throw Error(ErrorCode::Infeasible, "precision must be positive");

    const auto* gps = std::get_if<GpsCondition>(&mode);
    if (gps && !(gps->gamma > 0.0)) throw Error(ErrorCode::BadRange, "gamma must be positive");

    auto admissible = [&](double eta) {
        if (!(eta_condition_lhs(alpha_lo, alpha_hi, mode, eta) < target)) return false;
        return !gps || gps->sigma.value(eta) < gps->gamma * alpha_lo.value(target);
    };

    // lhs(eta) >= eta, so eta = target never qualifies.
    double lo = 0.0;
    double hi = target;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (admissible(mid) ? lo : hi) = mid;
    }
    if (!(lo > tol) || !admissible(lo))
        throw Error(ErrorCode::Infeasible, "no quantization radius satisfies the condition");
    return lo;
}

}  // namespace symabs
