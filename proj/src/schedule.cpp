#include "mab/schedule.hpp"

#include <cmath>

#include "mab/types.hpp"

namespace mab {

PseudorotationSchedule::PseudorotationSchedule(Form form, double theta0, double omega, double ramp_time,
                                               double duration)
    : form_(form), theta0_(theta0), omega_(omega), ramp_time_(ramp_time), duration_(duration) {
    if (!std::isfinite(theta0) || !std::isfinite(omega) || !std::isfinite(ramp_time) ||
        !std::isfinite(duration))
        throw DomainError("schedule values must be finite");
    if (duration <= 0.0) throw DomainError("schedule duration must be positive");
    if (form == Form::smooth_ramp && ramp_time <= 0.0) throw DomainError("ramp_time must be positive");
}

PseudorotationSchedule PseudorotationSchedule::uniform(double theta0, double omega, double duration) {
    return {Form::uniform, theta0, omega, 0.0, duration};
}

PseudorotationSchedule PseudorotationSchedule::smooth_ramp(double theta0, double omega_max, double ramp_time,
                                                           double duration) {
    return {Form::smooth_ramp, theta0, omega_max, ramp_time, duration};
}

double PseudorotationSchedule::duration_for_sweep(Form form, double omega, double ramp_time, double sweep) {
    if (omega == 0.0 || !std::isfinite(omega)) throw DomainError("sweep needs a nonzero finite rate");
    const double t_uniform = std::abs(sweep / omega);
    if (form == Form::uniform) return t_uniform;
    // The ramp covers omega*ramp_time/2 of angle.
    const double ramp_sweep = 0.5 * std::abs(omega) * ramp_time;
    if (std::abs(sweep) >= ramp_sweep) return ramp_time + (std::abs(sweep) - ramp_sweep) / std::abs(omega);
    // Invert theta(t) = omega tau (x^3 - x^4/2) on the ramp by bisection.
    double lo = 0.0, hi = 1.0;
    const double target = std::abs(sweep) / (std::abs(omega) * ramp_time);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = mid * mid * mid - 0.5 * mid * mid * mid * mid;
        (f < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) * ramp_time;
}

double PseudorotationSchedule::theta(double t) const {
    if (form_ == Form::uniform) return theta0_ + omega_ * t;
    if (t >= ramp_time_) return theta0_ + omega_ * (0.5 * ramp_time_ + (t - ramp_time_));
    const double x = t / ramp_time_;
    return theta0_ + omega_ * ramp_time_ * (x * x * x - 0.5 * x * x * x * x);
}

double PseudorotationSchedule::theta_dot(double t) const {
    if (form_ == Form::uniform || t >= ramp_time_) return omega_;
    const double x = t / ramp_time_;
    return omega_ * x * x * (3.0 - 2.0 * x);
}

}  // namespace mab
