#include "mab/autocorrelation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mab {

AutocorrelationTrace autocorrelation_from_rotation(const RotationTrajectory& trajectory) {
    AutocorrelationTrace trace;
    trace.times = trajectory.times;
    trace.thetas = trajectory.thetas;
    trace.c.reserve(trajectory.rotations.size());
    trace.s.reserve(trajectory.rotations.size());
    for (const Mat3& r : trajectory.rotations) {
        trace.c.push_back(0.5 * (r(0, 0) + r(1, 1)));
        trace.s.push_back(0.5 * (r(1, 0) - r(0, 1)));
    }
    return trace;
}

AutocorrelationTrace integrate_model_ode(const ModelParams& params, const PseudorotationSchedule& schedule,
                                         double dt, std::size_t record_every) {
    check_time_step(params, dt);
    if (record_every == 0) throw DomainError("record_every must be positive");

    const double xi = params.xi();
    const double fast = fast_frequency(params);
    auto rhs = [&](double t, double c, double s) {
        const double drive = xi * schedule.theta_dot(t);
        return std::pair{2.0 * drive * s - drive * std::sin(fast * t),
                         -2.0 * drive * c + drive * (1.0 - std::cos(fast * t))};
    };

    const double raw = schedule.duration() / dt;
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw)));
    const double h = schedule.duration() / static_cast<double>(steps);

    AutocorrelationTrace trace;
    double c = 1.0, s = 0.0;
    auto record = [&](double t) {
        trace.times.push_back(t);
        trace.thetas.push_back(schedule.theta(t));
        trace.c.push_back(c);
        trace.s.push_back(s);
    };
    record(0.0);
    for (std::size_t n = 1; n <= steps; ++n) {
        const double t = h * static_cast<double>(n - 1);
        const auto [k1c, k1s] = rhs(t, c, s);
        const auto [k2c, k2s] = rhs(t + 0.5 * h, c + 0.5 * h * k1c, s + 0.5 * h * k1s);
        const auto [k3c, k3s] = rhs(t + 0.5 * h, c + 0.5 * h * k2c, s + 0.5 * h * k2s);
        const auto [k4c, k4s] = rhs(t + h, c + h * k3c, s + h * k3s);
        c += h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c);
        s += h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
        if (n % record_every == 0 || n == steps) record(h * static_cast<double>(n));
    }
    return trace;
}

namespace {

// Integral of the piecewise-linear interpolant of (times, values) from times[0] to t.
class CumulativeIntegral {
public:
    CumulativeIntegral(const std::vector<double>& times, const std::vector<double>& values)
        : times_(times), values_(values), prefix_(times.size(), 0.0) {
        for (std::size_t i = 1; i < times.size(); ++i)
            prefix_[i] = prefix_[i - 1] + 0.5 * (times[i] - times[i - 1]) * (values[i] + values[i - 1]);
    }

    double operator()(double t) const {
        auto it = std::upper_bound(times_.begin(), times_.end(), t);
        std::size_t j = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
        if (j + 1 >= times_.size()) j = times_.size() - 2;
        const double span = times_[j + 1] - times_[j];
        const double frac = (t - times_[j]) / span;
        const double value_at_t = values_[j] + frac * (values_[j + 1] - values_[j]);
        return prefix_[j] + 0.5 * (t - times_[j]) * (values_[j] + value_at_t);
    }

private:
    const std::vector<double>& times_;
    const std::vector<double>& values_;
    std::vector<double> prefix_;
};

}  // namespace

AutocorrelationTrace adiabatic_average(AutocorrelationTrace trace, const ModelParams& params) {
    const std::size_t n = trace.times.size();
    if (n < 2 || trace.c.size() != n || trace.s.size() != n)
        throw InsufficientSamplingError("adiabatic_average: trace needs at least two consistent samples");
    const double period = fast_period(params);
    double max_spacing = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dt = trace.times[i] - trace.times[i - 1];
        if (!(dt > 0.0)) throw DomainError("adiabatic_average: times must be strictly increasing");
        max_spacing = std::max(max_spacing, dt);
    }
    if (period / max_spacing < 20.0 * (1.0 - 1e-9))
        throw InsufficientSamplingError("adiabatic_average: fewer than 20 samples per fast period (" +
                                        std::to_string(period / max_spacing) + ")");
    const double t_first = trace.times.front();
    const double t_last = trace.times.back();
    if (t_last - t_first < period * (1.0 - 1e-12))
        throw InsufficientSamplingError("adiabatic_average: trace shorter than one fast period");

    const CumulativeIntegral c_int(trace.times, trace.c);
    const CumulativeIntegral s_int(trace.times, trace.s);
    trace.c_bar.assign(n, 0.0);
    trace.s_bar.assign(n, 0.0);
    trace.one_sided.assign(n, false);
    trace.window = period;
    trace.window_alignment = "centered";
    // Tolerance absorbs rounding in window endpoints computed from sample times.
    const double slack = 1e-9 * max_spacing;
    for (std::size_t i = 0; i < n; ++i) {
        double lo = trace.times[i] - 0.5 * period;
        double hi = trace.times[i] + 0.5 * period;
        if (lo < t_first - slack) {
            lo = t_first;
            hi = t_first + period;
            trace.one_sided[i] = true;
        } else if (hi > t_last + slack) {
            hi = t_last;
            lo = t_last - period;
            trace.one_sided[i] = true;
        }
        lo = std::max(lo, t_first);
        hi = std::min(hi, t_last);
        trace.c_bar[i] = (c_int(hi) - c_int(lo)) / (hi - lo);
        trace.s_bar[i] = (s_int(hi) - s_int(lo)) / (hi - lo);
    }
    return trace;
}

AveragedCorrelation averaged_closed_form(const ModelParams& params, double delta_theta) {
    const double angle = 2.0 * params.xi() * delta_theta;
    return {0.5 * (1.0 + std::cos(angle)), -0.5 * std::sin(angle)};
}

std::vector<double> relative_angle(const AutocorrelationTrace& trace, double gap_tolerance) {
    if (trace.c_bar.size() != trace.times.size() || trace.s_bar.size() != trace.times.size())
        throw DomainError("relative_angle: trace has no averaged fields");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> phi(trace.times.size(), std::numeric_limits<double>::quiet_NaN());
    bool have_previous = false;
    double previous = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double x = 2.0 * trace.c_bar[i] - 1.0;
        const double y = -2.0 * trace.s_bar[i];
        if (std::hypot(x, y) < gap_tolerance) continue;
        double value = std::atan2(y, x);
        if (have_previous) {
            value += two_pi * std::round((previous - value) / two_pi);
        }
        phi[i] = value;
        previous = value;
        have_previous = true;
    }
    return phi;
}

ClosedFormDeviation deviation_from_closed_form(const AutocorrelationTrace& averaged, const ModelParams& params) {
    const std::vector<double> phi = relative_angle(averaged);
    ClosedFormDeviation dev;
    const double theta0 = averaged.thetas.front();
    for (std::size_t i = 0; i < averaged.times.size(); ++i) {
        const double delta = averaged.thetas[i] - theta0;
        const auto closed = averaged_closed_form(params, delta);
        dev.max_c_bar = std::max(dev.max_c_bar, std::abs(averaged.c_bar[i] - closed.c_bar));
        dev.max_s_bar = std::max(dev.max_s_bar, std::abs(averaged.s_bar[i] - closed.s_bar));
        if (!std::isnan(phi[i]))
            dev.max_phi = std::max(dev.max_phi, std::abs(phi[i] - 2.0 * params.xi() * delta));
    }
    return dev;
}

}  // namespace mab
