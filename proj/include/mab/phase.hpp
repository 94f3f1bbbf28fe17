// Small angle utilities shared by the phase computations.
#pragma once

#include <cmath>
#include <numbers>

namespace mab {

/// Maps an angle to (-pi, pi].
inline double wrap_phase(double angle) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double out = std::remainder(angle, two_pi);  // [-pi, pi]
    if (out <= -std::numbers::pi) out += two_pi;
    return out;
}

/// Shortest signed distance between two angles, in [0, pi].
inline double angular_distance(double a, double b) { return std::abs(wrap_phase(a - b)); }

}  // namespace mab
