#include "mab/propagation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "mab/phase.hpp"

namespace mab {

namespace {

// Fourth-order commutator-free Magnus scheme: two Gauss-Legendre nodes and two exponentials.
constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kNode1 = 0.5 - kSqrt3 / 6.0;
constexpr double kNode2 = 0.5 + kSqrt3 / 6.0;
constexpr double kWeightA = 0.25 - kSqrt3 / 6.0;
constexpr double kWeightB = 0.25 + kSqrt3 / 6.0;

std::size_t step_count(double duration, double dt) {
    const double raw = duration / dt;
    auto n = static_cast<std::size_t>(std::ceil(raw - 1e-9 * raw));
    return n == 0 ? 1 : n;
}

bool should_record(std::size_t step, std::size_t steps, std::size_t every) {
    return step % every == 0 || step == steps;
}

Mat3 cross_matrix(const Vec3& w) {
    Mat3 m;
    m << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
    return m;
}

Mat3 nearest_rotation(const Mat3& r) {
    Eigen::JacobiSVD<Mat3> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

double max_time_step(const ModelParams& params) {
    if (params.k() <= 0.0) throw DomainError("time propagation requires k > 0");
    return std::numbers::pi / (50.0 * params.k() * params.k());
}

void check_time_step(const ModelParams& params, double dt) {
    if (!std::isfinite(dt) || dt <= 0.0) throw DomainError("time step must be positive and finite");
    const double bound = max_time_step(params);
    if (dt > bound * (1.0 + 1e-12)) throw StepTooLargeError(dt, bound);
}

Vec3 spin_field(const ModelParams& params, const PseudorotationSchedule& schedule, Frame frame, double t) {
    const double g = frozen_coupling(params);
    if (frame == Frame::lab) {
        const double angle = 2.0 * params.xi() * schedule.theta(t);
        return {g * std::cos(angle), g * std::sin(angle), 0.0};
    }
    return {g, 0.0, -params.xi() * schedule.theta_dot(t)};
}

SpinOperator su2_exponential(const Vec3& h, double tau) {
    const double norm = h.norm();
    const double angle = norm * tau;
    SpinOperator out = std::cos(angle) * SpinOperator::Identity();
    if (norm == 0.0) return out;
    const Vec3 n = h / norm;
    const Complex mis = Complex(0.0, -std::sin(angle));
    out += mis * (n.x() * pauli_x() + n.y() * pauli_y() + n.z() * pauli_z());
    return out;
}

Mat3 so3_exponential(const Vec3& w, double tau) {
    const double norm = w.norm();
    if (norm == 0.0) return Mat3::Identity();
    const double angle = norm * tau;
    const Mat3 k = cross_matrix(w / norm);
    return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

Vec3 bloch_vector(const Spinor& psi) {
    const Complex off = std::conj(psi(0)) * psi(1);
    return {2.0 * off.real(), 2.0 * off.imag(), std::norm(psi(0)) - std::norm(psi(1))};
}

Spinor default_initial_state(const ModelParams& params, const PseudorotationSchedule& schedule, Frame frame) {
    const double theta0 = schedule.theta(0.0);
    const Spinor lab = adiabatic_eigensystem(params, params.r_ref(), theta0).minus;
    if (frame == Frame::lab) return lab;
    return frame_rotation(theta0, params.xi()).adjoint() * lab;
}

SpinTrajectory propagate_tdse(const ModelParams& params, const PseudorotationSchedule& schedule, Frame frame,
                              const PropagationOptions& options) {
    check_time_step(params, options.dt);
    if (options.record_every == 0 || options.projection_interval == 0)
        throw DomainError("record_every and projection_interval must be positive");

    SpinTrajectory traj;
    traj.frame = frame;
    traj.steps = step_count(schedule.duration(), options.dt);
    traj.step = schedule.duration() / static_cast<double>(traj.steps);
    const double h = traj.step;

    Spinor psi = options.initial.value_or(default_initial_state(params, schedule, frame));
    if (!psi.allFinite()) throw DomainError("initial state must be finite");
    psi.normalize();

    auto energy_at = [&](double t, const Spinor& state) {
        return spin_field(params, schedule, frame, t).dot(bloch_vector(state));
    };

    double phase = 0.0;
    double previous_energy = energy_at(0.0, psi);
    auto record = [&](double t, double energy) {
        traj.times.push_back(t);
        traj.thetas.push_back(schedule.theta(t));
        traj.states.push_back(psi);
        traj.energies.push_back(energy);
        traj.dynamical_phase.push_back(phase);
    };
    record(0.0, previous_energy);

    for (std::size_t n = 1; n <= traj.steps; ++n) {
        const double t0 = h * static_cast<double>(n - 1);
        const Vec3 f1 = spin_field(params, schedule, frame, t0 + kNode1 * h);
        const Vec3 f2 = spin_field(params, schedule, frame, t0 + kNode2 * h);
        psi = su2_exponential(kWeightA * f1 + kWeightB * f2, h) * (su2_exponential(kWeightB * f1 + kWeightA * f2, h) * psi);

        const double t = h * static_cast<double>(n);
        traj.max_norm_deviation = std::max(traj.max_norm_deviation, std::abs(psi.norm() - 1.0));
        if (n % options.projection_interval == 0) psi.normalize();

        // <H> varies on the slow scale plus a small fast ripple; trapezoid at full step resolution.
        const double energy = energy_at(t, psi);
        phase += 0.5 * h * (previous_energy + energy);
        previous_energy = energy;
        if (should_record(n, traj.steps, options.record_every)) record(t, energy);
    }
    return traj;
}

RotationTrajectory propagate_heisenberg(const ModelParams& params, const PseudorotationSchedule& schedule,
                                        const PropagationOptions& options) {
    check_time_step(params, options.dt);
    if (options.record_every == 0 || options.projection_interval == 0)
        throw DomainError("record_every and projection_interval must be positive");

    RotationTrajectory traj;
    traj.steps = step_count(schedule.duration(), options.dt);
    traj.step = schedule.duration() / static_cast<double>(traj.steps);
    const double h = traj.step;

    // Omega = B = 2 h_rot in the rotating frame.
    auto omega = [&](double t) { return Vec3(2.0 * spin_field(params, schedule, Frame::rotating, t)); };

    Mat3 r = Mat3::Identity();
    traj.times.push_back(0.0);
    traj.thetas.push_back(schedule.theta(0.0));
    traj.rotations.push_back(r);

    for (std::size_t n = 1; n <= traj.steps; ++n) {
        const double t0 = h * static_cast<double>(n - 1);
        const Vec3 w1 = omega(t0 + kNode1 * h);
        const Vec3 w2 = omega(t0 + kNode2 * h);
        r = so3_exponential(kWeightA * w1 + kWeightB * w2, h) * (so3_exponential(kWeightB * w1 + kWeightA * w2, h) * r);

        const double orth = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
        traj.max_orthogonality_error = std::max(traj.max_orthogonality_error, orth);
        traj.max_determinant_error = std::max(traj.max_determinant_error, std::abs(r.determinant() - 1.0));
        if (n % options.projection_interval == 0) r = nearest_rotation(r);

        if (should_record(n, traj.steps, options.record_every)) {
            const double t = h * static_cast<double>(n);
            traj.times.push_back(t);
            traj.thetas.push_back(schedule.theta(t));
            traj.rotations.push_back(r);
        }
    }
    return traj;
}

std::vector<double> geometric_phase_from_tdse(const SpinTrajectory& trajectory) {
    if (trajectory.frame != Frame::lab)
        throw DomainError("geometric_phase_from_tdse needs a lab-frame trajectory");
    std::vector<double> gamma;
    gamma.reserve(trajectory.states.size());
    const Spinor& initial = trajectory.states.front();
    for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
        const Complex overlap = initial.dot(trajectory.states[i]);
        if (std::abs(overlap) < 1e-6) {
            gamma.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        gamma.push_back(wrap_phase(std::arg(overlap) + trajectory.dynamical_phase[i]));
    }
    return gamma;
}

}  // namespace mab
