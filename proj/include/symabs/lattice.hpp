#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "symabs/numerics.hpp"

namespace symabs {

/// Uniform lattice with spacing 2*eta/sqrt(n): every point of R^n lies within
/// eta (Euclidean) of its nearest lattice point.
class LatticeParams {
public:
    /// Throws BadRange unless n >= 1 and eta is finite and positive.
    LatticeParams(std::size_t n, double eta);

    [[nodiscard]] std::size_t dimension() const noexcept { return n_; }
    [[nodiscard]] double eta() const noexcept { return eta_; }
    [[nodiscard]] double spacing() const noexcept { return spacing_; }
    /// Per-coordinate quantization radius eta/sqrt(n).
    [[nodiscard]] double half_spacing() const noexcept { return half_spacing_; }

    bool operator==(const LatticeParams&) const = default;

private:
    std::size_t n_;
    double eta_;
    double spacing_;
    double half_spacing_;
};

struct LatticePoint {
    std::vector<std::int64_t> indices;
    Vector coordinates;

    bool operator==(const LatticePoint&) const = default;
};

/// Coordinates of the lattice point with the given integer indices.
Vector lattice_coordinates(std::span<const std::int64_t> indices, const LatticeParams& params);

/// Nearest lattice point, per coordinate; midpoints round away from zero.
/// Throws DimensionMismatch, NonFinite, or Overflow when an index would not
/// fit in 64 bits.
LatticePoint quantize(std::span<const double> x, const LatticeParams& params);

}  // namespace symabs
