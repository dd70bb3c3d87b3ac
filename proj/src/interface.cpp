#include "symabs/interface.hpp"

#include <cmath>
#include <string>

#include "symabs/error.hpp"

namespace symabs {

AffineInterface::AffineInterface(Matrix gain) : gain_(std::move(gain)) {
    if (!gain_.all_finite()) throw Error(ErrorCode::NonFinite, "interface gain has non-finite entries");
}

AffineInterface AffineInterface::from_sine_certificate(const Matrix& p, const Matrix& r) {
    return AffineInterface(solve(p, r));
}

Vector apply_interface(const AffineInterface& iface, std::span<const double> v,
                       std::span<const double> x1, std::span<const double> x2) {
    if (v.size() != iface.input_dimension() || x1.size() != iface.state_dimension())
        throw Error(ErrorCode::DimensionMismatch, "interface input or state has the wrong length");
    return add(v, iface.gain() * subtract(x1, x2));
}

double input_margin(const Matrix& l, double k1, double eta) {
    if (!(k1 >= 0.0) || !(eta >= 0.0)) throw Error(ErrorCode::BadRange, "K1 and eta must be >= 0");
    return spectral_norm(l) * (k1 + 1.0) * eta;
}

BoxInputSet shrink_box(const BoxInputSet& u, double r) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw Error(ErrorCode::BadRange, "margin must be >= 0");
    if (u.is_all_space()) return u;
    Vector lower = u.lower();
    Vector upper = u.upper();
    for (std::size_t i = 0; i < lower.size(); ++i) {
        lower[i] += r;
        upper[i] -= r;
        if (upper[i] < lower[i]) {
            throw Error(ErrorCode::EmptyResult,
                        "input box collapses at coordinate " + std::to_string(i) +
                            " for margin " + std::to_string(r) + "; reduce eta");
        }
    }
    return BoxInputSet::box(std::move(lower), std::move(upper));
}

}  // namespace symabs
