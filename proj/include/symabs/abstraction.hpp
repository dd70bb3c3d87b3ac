#pragma once

// Joint simulation of the concrete system and its quantized abstraction,
// coupled through an affine interface.
//
// The abstraction is defined pointwise: phi solves the nominal dynamics
// from Q(x1(0)) under the abstract input v, and the abstract state is
// x2(t) = Q(phi(t)). The concrete system is driven by u = v + G (x1 - x2).

#include <span>
#include <vector>

#include "symabs/dynamics.hpp"
#include "symabs/input_set.hpp"
#include "symabs/interface.hpp"
#include "symabs/lattice.hpp"

namespace symabs {

struct AugmentedState {
    Vector x1;
    Vector x2;
};

/// Distance to the diagonal {(x, x)}, using the convention ||x1 - x2||
/// (not the Euclidean point-to-set distance, which is smaller by sqrt(2)).
double omega_distance(const AugmentedState& s);

/// True iff ||x1 - x2|| <= eta.
bool initial_pair_check(std::span<const double> x1, std::span<const double> x2, double eta);

struct AugmentedRun {
    double step = 0.0;
    std::vector<double> times;
    std::vector<Vector> x1_states;
    std::vector<Vector> phi_states;
    std::vector<Vector> x2_states;
    std::vector<Vector> u_values;
    std::vector<Vector> v_values;
    std::vector<double> y_err;

    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

/// Integrates (x1, phi) as one stacked RK4 system on the grid t_i = i*h.
/// x2 = Q(phi) is frozen at its step-start value over each step.
///
/// Throws Diverged, MisalignedSignal, DimensionMismatch, and InputViolation
/// when a recorded u leaves `input_set`.
AugmentedRun simulate_augmented(const SystemModel& sys, const AffineInterface& iface,
                                std::span<const double> x1_0, const PiecewiseConstantSignal& v,
                                const LatticeParams& params, double horizon,
                                double h = kDefaultStep,
                                const BoxInputSet& input_set = BoxInputSet::all_space());

}  // namespace symabs
