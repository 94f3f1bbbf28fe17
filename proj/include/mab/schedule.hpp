#pragma once

namespace mab {

/// Prescribed nuclear pseudorotation theta(t) on [0, duration].
///
/// Uniform: theta = theta0 + omega t.
/// Smooth ramp: theta_dot = omega_max * s(t / ramp_time) with the smoothstep
/// s(x) = x^2 (3 - 2x) for x < 1 and 1 afterwards, so theta_dot(0) = 0 and both
/// theta and theta_dot are continuous.
class PseudorotationSchedule {
public:
    enum class Form { uniform, smooth_ramp };

    static PseudorotationSchedule uniform(double theta0, double omega, double duration);
    static PseudorotationSchedule smooth_ramp(double theta0, double omega_max, double ramp_time,
                                              double duration);

    /// Duration after which theta - theta0 reaches sweep (rate must be nonzero).
    static double duration_for_sweep(Form form, double omega, double ramp_time, double sweep);

    double theta(double t) const;
    double theta_dot(double t) const;

    Form form() const { return form_; }
    double theta0() const { return theta0_; }
    double omega() const { return omega_; }
    double ramp_time() const { return ramp_time_; }
    double duration() const { return duration_; }

private:
    PseudorotationSchedule(Form form, double theta0, double omega, double ramp_time, double duration);

    Form form_;
    double theta0_;
    double omega_;
    double ramp_time_;
    double duration_;
};

}  // namespace mab
