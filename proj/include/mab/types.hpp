// Shared numeric types and error hierarchy for the E x e Jahn-Teller toolkit.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mab {

using Complex = std::complex<double>;

/// Two-component electronic state in the diabatic basis {|0>, |1>}.
using Spinor = Eigen::Vector2cd;

/// 2x2 operator on the electronic two-level space.
using SpinOperator = Eigen::Matrix2cd;

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Invalid arguments or parameters outside an operation's domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation at a point where the model is singular (r = 0, path through the origin).
class SingularityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Overlap too small for a phase to be defined.
class OrthogonalStatesError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Noncyclic phase requested exactly at a pi-jump locus.
class UndefinedPhaseError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Time step does not resolve the fast electronic oscillation.
class StepTooLargeError : public DomainError {
public:
    StepTooLargeError(double dt, double bound)
        : DomainError("time step " + std::to_string(dt) + " exceeds the fast-scale bound " +
                      std::to_string(bound)),
          dt_(dt), bound_(bound) {}
    double dt() const { return dt_; }
    double bound() const { return bound_; }

private:
    double dt_;
    double bound_;
};

/// Trace sampled too coarsely (or too briefly) for a one-period average.
class InsufficientSamplingError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Polygonal path with a segment subtending >= pi/2 at the origin.
class PathTooCoarseError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Inputs computed under different model parameters.
class MismatchError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace mab
