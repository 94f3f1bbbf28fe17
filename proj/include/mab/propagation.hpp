// Time propagation of the electronic two-level system under a prescribed pseudorotation,
// with the radius frozen so that the spin coupling is k^2.
//
// Lab frame:      H(t)  = k^2 [cos(2 xi theta) sx + sin(2 xi theta) sy]
// Rotating frame: H'(t) = k^2 sx - xi theta_dot sz = (1/2) B . sigma,  B = (2k^2, 0, -2 xi theta_dot)
//
// Both pictures use a fourth-order commutator-free Magnus step built from exact SU(2)
// (resp. SO(3)) exponentials, so the state norm and the orthogonality of the Heisenberg
// transfer matrix are preserved to rounding.
#pragma once

#include <optional>
#include <vector>

#include "mab/model.hpp"
#include "mab/schedule.hpp"
#include "mab/types.hpp"

namespace mab {

enum class Frame { lab, rotating };

struct PropagationOptions {
    double dt = 0.0;                    ///< requested step; must satisfy dt <= pi/(50 k^2)
    std::size_t record_every = 1;       ///< store every n-th step (the last step is always stored)
    std::size_t projection_interval = 1000;
    std::optional<Spinor> initial;      ///< defaults to the lower adiabatic state at theta0
};

struct SpinTrajectory {
    Frame frame = Frame::lab;
    std::vector<double> times;
    std::vector<double> thetas;
    std::vector<Spinor> states;
    std::vector<double> energies;       ///< <psi|H(t)|psi> at each stored sample
    std::vector<double> dynamical_phase; ///< int_0^t <psi|H|psi> dt' accumulated at full resolution
    double step = 0.0;
    std::size_t steps = 0;
    double max_norm_deviation = 0.0;    ///< over every step, measured before renormalization
};

struct RotationTrajectory {
    std::vector<double> times;
    std::vector<double> thetas;
    std::vector<Mat3> rotations;        ///< sigma_i(t) = sum_j R_ij sigma_j(0)
    double step = 0.0;
    std::size_t steps = 0;
    double max_orthogonality_error = 0.0; ///< max |R^T R - I| entrywise over every step
    double max_determinant_error = 0.0;   ///< max |det R - 1| over every step
};

/// Largest admissible step pi/(50 k^2).
double max_time_step(const ModelParams& params);

/// Throws StepTooLargeError if dt exceeds max_time_step, DomainError if dt is not positive.
void check_time_step(const ModelParams& params, double dt);

/// Field vector h of the spin Hamiltonian H = h . sigma at time t.
Vec3 spin_field(const ModelParams& params, const PseudorotationSchedule& schedule, Frame frame, double t);

/// exp(-i tau h . sigma).
SpinOperator su2_exponential(const Vec3& h, double tau);

/// exp(tau [w]_x): rotation by |w| tau about w.
Mat3 so3_exponential(const Vec3& w, double tau);

/// Bloch vector (<sx>, <sy>, <sz>) of a normalized state.
Vec3 bloch_vector(const Spinor& psi);

/// Initial state used when none is supplied: the lower adiabatic state at theta0,
/// transformed by U^dagger(theta0) in the rotating frame.
Spinor default_initial_state(const ModelParams& params, const PseudorotationSchedule& schedule, Frame frame);

SpinTrajectory propagate_tdse(const ModelParams& params, const PseudorotationSchedule& schedule, Frame frame,
                              const PropagationOptions& options);

RotationTrajectory propagate_heisenberg(const ModelParams& params, const PseudorotationSchedule& schedule,
                                        const PropagationOptions& options);

/// Noncyclic geometric phase along a lab-frame trajectory:
///   gamma(t) = arg<psi(0)|psi(t)> + int_0^t <psi|H|psi> dt'   mapped to (-pi, pi].
/// Samples with |<psi(0)|psi(t)>| < 1e-6 carry NaN.
std::vector<double> geometric_phase_from_tdse(const SpinTrajectory& trajectory);

}  // namespace mab
