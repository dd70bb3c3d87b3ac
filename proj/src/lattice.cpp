#include "symabs/lattice.hpp"

#include <cmath>
#include <string>

#include "symabs/error.hpp"

namespace symabs {

LatticeParams::LatticeParams(std::size_t n, double eta) : n_(n), eta_(eta) {
    if (n == 0) throw Error(ErrorCode::BadRange, "lattice dimension must be positive");
    if (!std::isfinite(eta) || eta <= 0.0)
        throw Error(ErrorCode::BadRange, "eta must be finite and positive, got " + std::to_string(eta));
    const double root_n = std::sqrt(static_cast<double>(n));
    spacing_ = 2.0 * eta / root_n;
    half_spacing_ = eta / root_n;
}

Vector lattice_coordinates(std::span<const std::int64_t> indices, const LatticeParams& params) {
    if (indices.size() != params.dimension())
        throw Error(ErrorCode::DimensionMismatch, "lattice index vector has wrong length");
    Vector q(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i)
        q[i] = static_cast<double>(indices[i]) * params.spacing();
    return q;
}

LatticePoint quantize(std::span<const double> x, const LatticeParams& params) {
    if (x.size() != params.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "state has length " + std::to_string(x.size()) +
                                                      ", lattice dimension is " +
                                                      std::to_string(params.dimension()));
    }
    // 2^62 leaves headroom below INT64_MAX and is exactly representable.
    constexpr double kIndexLimit = 4611686018427387904.0;

    LatticePoint point;
    point.indices.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw Error(ErrorCode::NonFinite, "cannot quantize non-finite state");
        const double k = std::round(x[i] / params.spacing());
        if (std::abs(k) >= kIndexLimit)
            throw Error(ErrorCode::Overflow, "lattice index out of range at coordinate " + std::to_string(i));
        point.indices[i] = static_cast<std::int64_t>(k);
    }
    point.coordinates = lattice_coordinates(point.indices, params);
    return point;
}

}  // namespace symabs
