#pragma once

#include <string>
#include <vector>

namespace mab {

/// Phase convention alpha(theta) multiplying the Born-Oppenheimer state.
///
/// alpha(theta) = a0 + linear*theta + sum_n [cos_coeffs[n-1] cos(n theta) + sin_coeffs[n-1] sin(n theta)]
///
/// Every instance is smooth in theta, so the Berry connection is well defined.
class GaugeSpec {
public:
    static constexpr std::size_t kMaxHarmonics = 64;

    /// alpha = 0, the gauge in which the state is displayed.
    static GaugeSpec zero();
    /// alpha = xi*theta, which makes the lower adiabatic state single-valued.
    static GaugeSpec single_valued(double xi);
    /// General Fourier gauge; cos_coeffs and sin_coeffs are padded to equal length.
    static GaugeSpec fourier(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                             double linear = 0.0);

    /// Parses "zero", "single", or "fourier:a0=..,a1=..,b1=..,c=..".
    static GaugeSpec parse(const std::string& text, double xi);

    double alpha(double theta) const;
    double alpha_prime(double theta) const;

    double a0() const { return a0_; }
    double linear() const { return linear_; }
    const std::vector<double>& cos_coeffs() const { return cos_; }
    const std::vector<double>& sin_coeffs() const { return sin_; }
    const std::string& label() const { return label_; }

private:
    GaugeSpec(double a0, std::vector<double> c, std::vector<double> s, double linear, std::string label);

    double a0_ = 0.0;
    std::vector<double> cos_;
    std::vector<double> sin_;
    double linear_ = 0.0;
    std::string label_;
};

}  // namespace mab
