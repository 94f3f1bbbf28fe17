#include "mab/model.hpp"

#include <cmath>
#include <numbers>

namespace mab {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_positive_k(const ModelParams& params, const char* what) {
    if (params.k() <= 0.0) throw DomainError(std::string(what) + " requires k > 0");
}

}  // namespace

ModelParams::ModelParams(double k, double xi, std::optional<double> r_ref)
    : k_(k), xi_(xi), r_ref_(r_ref.value_or(k > 0.0 ? k : 1.0)) {
    if (!std::isfinite(k_) || k_ < 0.0) throw DomainError("k must be finite and non-negative");
    if (!std::isfinite(xi_) || xi_ == 0.0) throw DomainError("xi must be finite and nonzero");
    const double twice = 2.0 * xi_;
    if (twice != std::round(twice)) throw DomainError("2*xi must be an integer");
    if (!std::isfinite(r_ref_) || r_ref_ <= 0.0) throw DomainError("r_ref must be positive");
}

SpinOperator pauli_x() {
    SpinOperator m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

SpinOperator pauli_y() {
    SpinOperator m;
    m << 0.0, -kI, kI, 0.0;
    return m;
}

SpinOperator pauli_z() {
    SpinOperator m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

bool is_hermitian(const SpinOperator& op, double tol) {
    const SpinOperator diff = op - op.adjoint();
    return diff.cwiseAbs().maxCoeff() <= tol;
}

SpinOperator electronic_hamiltonian(const ModelParams& params, double r, double theta) {
    if (!(r >= 0.0)) throw DomainError("electronic_hamiltonian: r must be >= 0");
    const double amplitude = params.k() * std::pow(r, params.coupling_power());
    const double angle = 2.0 * params.xi() * theta;
    SpinOperator h;
    h << 0.0, amplitude * std::polar(1.0, -angle), amplitude * std::polar(1.0, angle), 0.0;
    return h;
}

AdiabaticStates adiabatic_eigensystem(const ModelParams& params, double r, double theta,
                                      const GaugeSpec& gauge) {
    if (!(r > 0.0)) throw DomainError("adiabatic_eigensystem: r must be > 0");
    const double amplitude = params.k() * std::pow(r, params.coupling_power());
    const Complex global = std::polar(1.0 / std::numbers::sqrt2, gauge.alpha(theta));
    const Complex up = std::polar(1.0, -params.xi() * theta);
    const Complex down = std::polar(1.0, params.xi() * theta);

    AdiabaticStates out;
    out.e_minus = -amplitude;
    out.e_plus = amplitude;
    out.minus << global * up, -global * down;
    out.plus << global * up, global * down;
    return out;
}

SurfaceSample potential_surfaces(const ModelParams& params, double r, bool include_born_huang) {
    if (!(r >= 0.0)) throw DomainError("potential_surfaces: r must be >= 0");
    if (include_born_huang && r == 0.0)
        throw SingularityError("potential_surfaces: Born-Huang term diverges at r = 0");
    const double base = 0.5 * r * r + (include_born_huang ? 1.0 / (8.0 * r * r) : 0.0);
    const double split = params.k() * std::pow(r, params.coupling_power());
    return {r, base - split, base + split, include_born_huang};
}

double bo_regime_margin(const ModelParams& params) { return 2.0 * params.k() * params.k(); }

double adiabaticity_margin(const ModelParams& params, double theta_dot) {
    require_positive_k(params, "adiabaticity_margin");
    return std::abs(params.xi()) * std::abs(theta_dot) / (2.0 * params.k() * params.k());
}

EffectiveFields effective_fields(const ModelParams& params, double theta_dot, double r) {
    if (r == 0.0) throw SingularityError("effective_fields: E field of the line charge diverges at r = 0");
    if (!(r > 0.0)) throw DomainError("effective_fields: r must be > 0");
    EffectiveFields f;
    f.b = Vec3(2.0 * params.k() * params.k(), 0.0, -2.0 * params.xi() * theta_dot);
    f.e_radial = params.xi() / r;
    return f;
}

PauliFrame rotated_pauli_frame(double theta, double xi) {
    const double c = std::cos(2.0 * xi * theta);
    const double s = std::sin(2.0 * xi * theta);
    return {c * pauli_x() + s * pauli_y(), -s * pauli_x() + c * pauli_y(), pauli_z()};
}

SpinOperator frame_rotation(double theta, double xi) {
    SpinOperator u = SpinOperator::Zero();
    u(0, 0) = std::polar(1.0, -xi * theta);
    u(1, 1) = std::polar(1.0, xi * theta);
    return u;
}

double rotating_frame_residual(const ModelParams& params, double theta) {
    const SpinOperator u = frame_rotation(theta, params.xi());
    const SpinOperator h = electronic_hamiltonian(params, params.r_ref(), theta);
    const double amplitude = params.k() * std::pow(params.r_ref(), params.coupling_power());
    return (u.adjoint() * h * u - amplitude * pauli_x()).norm();
}

double frozen_coupling(const ModelParams& params) { return params.k() * params.k(); }

double fast_frequency(const ModelParams& params) { return 2.0 * params.k() * params.k(); }

double fast_period(const ModelParams& params) {
    require_positive_k(params, "fast_period");
    return std::numbers::pi / (params.k() * params.k());
}

}  // namespace mab
