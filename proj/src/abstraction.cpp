#include "symabs/abstraction.hpp"

#include <string>

#include "symabs/error.hpp"

namespace symabs {

double omega_distance(const AugmentedState& s) { return norm(subtract(s.x1, s.x2)); }

bool initial_pair_check(std::span<const double> x1, std::span<const double> x2, double eta) {
    return norm(subtract(x1, x2)) <= eta;
}

AugmentedRun simulate_augmented(const SystemModel& sys, const AffineInterface& iface,
                                std::span<const double> x1_0, const PiecewiseConstantSignal& v,
                                const LatticeParams& params, double horizon, double h,
                                const BoxInputSet& input_set) {
    const std::size_t n = state_dim(sys);
    const std::size_t m = input_dim(sys);
    if (x1_0.size() != n || params.dimension() != n || iface.state_dimension() != n ||
        iface.input_dimension() != m || v.dimension() != m) {
        throw Error(ErrorCode::DimensionMismatch,
                    "system, interface, lattice, initial state and abstract input disagree on dimensions");
    }
    if (const auto dim = input_set.dimension(); dim && *dim != m)
        throw Error(ErrorCode::DimensionMismatch, "input set dimension differs from the system input");
    const std::size_t steps = grid_steps(horizon, h);
    if (horizon > v.domain_end())
        throw Error(ErrorCode::BadRange, "horizon extends past the abstract input's domain");
    require_aligned(v, h);
    require_bounded(x1_0, 0.0);

    AugmentedRun run;
    run.step = h;
    const std::size_t samples = steps + 1;
    run.times.reserve(samples);
    run.x1_states.reserve(samples);
    run.phi_states.reserve(samples);
    run.x2_states.reserve(samples);
    run.u_values.reserve(samples);
    run.v_values.reserve(samples);
    run.y_err.reserve(samples);

    Vector stacked(2 * n);
    std::copy(x1_0.begin(), x1_0.end(), stacked.begin());
    const Vector phi0 = quantize(x1_0, params).coordinates;
    std::copy(phi0.begin(), phi0.end(), stacked.begin() + static_cast<std::ptrdiff_t>(n));

    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * h;
        const std::span<const double> x1(stacked.data(), n);
        const std::span<const double> phi(stacked.data() + n, n);
        const Vector x2 = quantize(phi, params).coordinates;
        const Vector& vi = v.on_step(t, h);
        Vector ui = apply_interface(iface, vi, x1, x2);
        if (!input_set.contains(ui)) {
            throw Error(ErrorCode::InputViolation,
                        "interface output left the input set at t = " + std::to_string(t));
        }

        run.times.push_back(t);
        run.x1_states.emplace_back(x1.begin(), x1.end());
        run.phi_states.emplace_back(phi.begin(), phi.end());
        run.y_err.push_back(norm(subtract(output(sys, x1), output(sys, x2))));
        run.x2_states.push_back(x2);
        run.u_values.push_back(std::move(ui));
        run.v_values.push_back(vi);
        if (i == steps) break;

        auto rhs = [&](std::span<const double> z) {
            const std::span<const double> zx1 = z.first(n);
            const std::span<const double> zphi = z.subspan(n, n);
            const Vector u = apply_interface(iface, vi, zx1, x2);
            const Vector dx1 = eval_rhs(sys, zx1, u);
            const Vector dphi = eval_rhs(sys, zphi, vi);
            Vector dz(2 * n);
            std::copy(dx1.begin(), dx1.end(), dz.begin());
            std::copy(dphi.begin(), dphi.end(), dz.begin() + static_cast<std::ptrdiff_t>(n));
            return dz;
        };
        stacked = rk4_step(rhs, stacked, h);
        require_bounded(stacked, static_cast<double>(i + 1) * h);
    }
    return run;
}

}  // namespace symabs
