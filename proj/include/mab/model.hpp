// Model definitions for the E x e Jahn-Teller problem in units hbar = m = omega = 1.
//
//   H = p_r^2/2 + p_theta^2/(2 r^2) + r^2/2 + k r^{2|xi|} [cos(2 xi theta) sx + sin(2 xi theta) sy]
//
// xi = 1/2 is the linear coupling model, xi = -1 the quadratic one.
#pragma once

#include <optional>

#include "mab/gauge.hpp"
#include "mab/types.hpp"

namespace mab {

/// The two dials of the model: coupling strength k and effect order xi.
///
/// k >= 0 is accepted so the uncoupled oscillator limit can be evaluated; operations
/// that divide by k reject k = 0. 2*xi must be a nonzero integer.
class ModelParams {
public:
    /// Throws DomainError on invalid input. r_ref defaults to k (or 1 when k = 0).
    ModelParams(double k, double xi, std::optional<double> r_ref = std::nullopt);

    double k() const { return k_; }
    double xi() const { return xi_; }
    double r_ref() const { return r_ref_; }
    /// Exponent 2|xi| of the radial coupling.
    double coupling_power() const { return 2.0 * std::abs(xi_); }
    /// True for the linear (1/2) and quadratic (-1) models.
    bool canonical() const { return xi_ == 0.5 || xi_ == -1.0; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;

private:
    double k_;
    double xi_;
    double r_ref_;
};

/// sx, sy, sz in the diabatic basis.
SpinOperator pauli_x();
SpinOperator pauli_y();
SpinOperator pauli_z();

/// Frobenius norm of (op - op^dagger) / 2 is below tol entrywise.
bool is_hermitian(const SpinOperator& op, double tol = 1e-12);

/// H_e(r, theta) = k r^{2|xi|} [cos(2 xi theta) sx + sin(2 xi theta) sy]. Requires r >= 0.
SpinOperator electronic_hamiltonian(const ModelParams& params, double r, double theta);

struct AdiabaticStates {
    double e_minus;
    double e_plus;
    Spinor minus;
    Spinor plus;
};

/// Eigenpairs of H_e with the phase convention
///   |-> = e^{i alpha}/sqrt2 (e^{-i xi theta}, -e^{i xi theta}),
///   |+> = e^{i alpha}/sqrt2 (e^{-i xi theta},  e^{i xi theta}).
/// With alpha = xi*theta the lower state is single-valued around the origin. Requires r > 0.
AdiabaticStates adiabatic_eigensystem(const ModelParams& params, double r, double theta,
                                      const GaugeSpec& gauge = GaugeSpec::zero());

struct SurfaceSample {
    double r;
    double e_minus;
    double e_plus;
    bool include_born_huang;
};

/// E_pm(r) = r^2/2 +- k r^{2|xi|} (+ 1/(8 r^2) with the Born-Huang term).
/// The 1/(8 r^2) term is used unchanged for every xi.
SurfaceSample potential_surfaces(const ModelParams& params, double r, bool include_born_huang);

/// 2k^2; the Born-Oppenheimer regime needs this to be >> 1.
double bo_regime_margin(const ModelParams& params);

/// |xi| |theta_dot| / (2k^2); small values mean adiabatic electronic motion.
double adiabaticity_margin(const ModelParams& params, double theta_dot);

struct EffectiveFields {
    Vec3 b;            ///< rotating-frame magnetic field (2k^2, 0, -2 xi theta_dot)
    double e_radial;   ///< xi / r, radial electric field of a line charge at the origin
};

EffectiveFields effective_fields(const ModelParams& params, double theta_dot, double r);

struct PauliFrame {
    SpinOperator x;  ///< cos(2 xi theta) sx + sin(2 xi theta) sy
    SpinOperator y;  ///< -sin(2 xi theta) sx + cos(2 xi theta) sy
    SpinOperator z;  ///< sz
};

PauliFrame rotated_pauli_frame(double theta, double xi);

/// U(theta) = exp(-i xi theta sz).
SpinOperator frame_rotation(double theta, double xi);

/// || U^dagger H_e(r_ref, theta) U - k r_ref^{2|xi|} sx ||_F.
double rotating_frame_residual(const ModelParams& params, double theta);

/// Amplitude of the spin coupling k^2 sx of the frozen-radius rotating-frame Hamiltonian.
/// For xi = 1/2 this equals k r^{2|xi|} at r = k.
double frozen_coupling(const ModelParams& params);

/// Fast electronic angular frequency 2k^2 and the matching period pi/k^2.
double fast_frequency(const ModelParams& params);
double fast_period(const ModelParams& params);

}  // namespace mab
