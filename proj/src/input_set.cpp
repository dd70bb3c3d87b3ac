#include "symabs/input_set.hpp"

#include <cmath>
#include <string>

#include "symabs/error.hpp"

namespace symabs {

BoxInputSet BoxInputSet::box(Vector lower, Vector upper) {
    if (lower.size() != upper.size())
        throw Error(ErrorCode::DimensionMismatch, "box bounds have different lengths");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
            throw Error(ErrorCode::BadRange, "box bound is not finite");
        if (lower[i] > upper[i])
            throw Error(ErrorCode::BadRange, "box lower > upper at coordinate " + std::to_string(i));
    }
    BoxInputSet set;
    set.bounded_ = true;
    set.lower_ = std::move(lower);
    set.upper_ = std::move(upper);
    return set;
}

std::optional<std::size_t> BoxInputSet::dimension() const noexcept {
    if (!bounded_) return std::nullopt;
    return lower_.size();
}

bool BoxInputSet::contains(std::span<const double> u, double slack) const {
    if (!bounded_) return true;
    if (u.size() != lower_.size())
        throw Error(ErrorCode::DimensionMismatch, "input has length " + std::to_string(u.size()) +
                                                      ", box has " + std::to_string(lower_.size()));
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] < lower_[i] - slack || u[i] > upper_[i] + slack) return false;
    return true;
}

}  // namespace symabs
