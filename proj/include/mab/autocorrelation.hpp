// Electronic autocorrelation observables in the rotating frame,
//   C(t) = (1/4)[sx(0) sx(t) + sy(0) sy(t) + h.c.],
//   S(t) = (1/4)[sx(0) sy(t) - sy(0) sx(t) + h.c.],
// their one-fast-period averages, and the relative angle they encode.
#pragma once

#include <string>
#include <vector>

#include "mab/model.hpp"
#include "mab/propagation.hpp"
#include "mab/schedule.hpp"

namespace mab {

struct AutocorrelationTrace {
    std::vector<double> times;
    std::vector<double> thetas;
    std::vector<double> c;
    std::vector<double> s;
    std::vector<double> c_bar;            ///< empty until adiabatic_average has run
    std::vector<double> s_bar;
    std::vector<bool> one_sided;          ///< window clipped at an end of the trace
    double window = 0.0;                  ///< averaging window (one fast period)
    std::string window_alignment = "centered";
};

/// C = (R_xx + R_yy)/2, S = (R_yx - R_xy)/2 from the Heisenberg transfer matrix.
/// Both operators are multiples of the identity because {s_i, s_j} = 2 delta_ij.
AutocorrelationTrace autocorrelation_from_rotation(const RotationTrajectory& trajectory);

/// Integrates the slow/fast system literally,
///   dC/dt =  2 xi theta_dot S - xi theta_dot sin(2k^2 t)
///   dS/dt = -2 xi theta_dot C + xi theta_dot [1 - cos(2k^2 t)],
/// from C(0) = 1, S(0) = 0 with classical RK4 at fixed step.
AutocorrelationTrace integrate_model_ode(const ModelParams& params, const PseudorotationSchedule& schedule,
                                         double dt, std::size_t record_every = 1);

/// Fills c_bar/s_bar with sliding means over exactly one fast period pi/k^2.
/// Windows are centered; near the ends they are shifted inward (one-sided) and flagged.
/// Requires at least 20 samples per period and a trace at least one period long.
AutocorrelationTrace adiabatic_average(AutocorrelationTrace trace, const ModelParams& params);

struct AveragedCorrelation {
    double c_bar;
    double s_bar;
};

/// C_bar = (1 + cos 2 xi dtheta)/2, S_bar = -sin(2 xi dtheta)/2.
AveragedCorrelation averaged_closed_form(const ModelParams& params, double delta_theta);

/// phi = atan2(-2 S_bar, 2 C_bar - 1), unwrapped across jumps larger than pi.
/// Samples where (2 C_bar - 1, -2 S_bar) has length below gap_tolerance are NaN; the
/// unwrap continues from the last defined value.
std::vector<double> relative_angle(const AutocorrelationTrace& trace, double gap_tolerance = 1e-6);

struct ClosedFormDeviation {
    double max_c_bar = 0.0;
    double max_s_bar = 0.0;
    double max_phi = 0.0;
};

/// Largest deviation of an averaged trace from the closed-form averages and of its
/// relative angle from 2 xi (theta - theta0).
ClosedFormDeviation deviation_from_closed_form(const AutocorrelationTrace& averaged, const ModelParams& params);

}  // namespace mab
