#pragma once

#include <span>

#include "symabs/input_set.hpp"
#include "symabs/numerics.hpp"

namespace symabs {

/// u = v + G (x1 - x2): abstract input plus a correction proportional to
/// the gap between concrete and quantized abstract state.
class AffineInterface {
public:
    /// Throws NonFinite if G has non-finite entries.
    explicit AffineInterface(Matrix gain);

    /// G = P^-1 R for the sine family's certificate.
    static AffineInterface from_sine_certificate(const Matrix& p, const Matrix& r);

    [[nodiscard]] const Matrix& gain() const noexcept { return gain_; }
    [[nodiscard]] std::size_t input_dimension() const noexcept { return gain_.rows(); }
    [[nodiscard]] std::size_t state_dimension() const noexcept { return gain_.cols(); }

private:
    Matrix gain_;
};

/// v + G (x1 - x2). Throws DimensionMismatch.
Vector apply_interface(const AffineInterface& iface, std::span<const double> v,
                       std::span<const double> x1, std::span<const double> x2);

/// Radius ||L|| (K1 + 1) eta bounding |u - v| along runs whose state gap
/// stays within (K1 + 1) eta. Throws BadRange for negative K1 or eta.
double input_margin(const Matrix& l, double k1, double eta);

/// Inner box [lower + r, upper - r]: every point of it is at least r away
/// from the boundary of U, so v + d stays in U whenever |d| <= r. The whole
/// space maps to itself. Throws EmptyResult if the box collapses and
/// BadRange for negative r.
BoxInputSet shrink_box(const BoxInputSet& u, double r);

}  // namespace symabs
