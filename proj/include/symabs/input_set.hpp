#pragma once

#include <optional>
#include <span>

#include "symabs/numerics.hpp"

namespace symabs {

/// Axis-aligned box of admissible inputs, or the whole space.
class BoxInputSet {
public:
    /// The unconstrained set R^m.
    static BoxInputSet all_space() { return BoxInputSet(); }
    /// Throws DimensionMismatch on length mismatch, BadRange if lower > upper
    /// anywhere or a bound is non-finite.
    static BoxInputSet box(Vector lower, Vector upper);

    [[nodiscard]] bool is_all_space() const noexcept { return !bounded_; }
    [[nodiscard]] const Vector& lower() const noexcept { return lower_; }
    [[nodiscard]] const Vector& upper() const noexcept { return upper_; }
    /// Box dimension, or nullopt for the whole space.
    [[nodiscard]] std::optional<std::size_t> dimension() const noexcept;

    /// Componentwise membership with an absolute slack.
    [[nodiscard]] bool contains(std::span<const double> u, double slack = 0.0) const;

    bool operator==(const BoxInputSet&) const = default;

private:
    BoxInputSet() = default;

    bool bounded_ = false;
    Vector lower_;
    Vector upper_;
};

}  // namespace symabs
