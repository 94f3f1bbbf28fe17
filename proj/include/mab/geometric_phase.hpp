// Noncyclic Berry phase of the lower Born-Oppenheimer state and holonomy of the
// vector potential (xi / r) e_theta along planar nuclear paths.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "mab/gauge.hpp"
#include "mab/types.hpp"

namespace mab {

/// e^{i alpha(theta)}/sqrt2 [e^{-i xi theta}|0> + e^{i xi theta}|1>].
///
/// For k > 0 this vector is the +k r^{2|xi|} eigenvector of H_e; the lower state of
/// adiabatic_eigensystem equals sz * bo_state. Both give identical overlaps and connections.
Spinor bo_state(double theta, double xi, const GaugeSpec& gauge);

/// d/dtheta of bo_state, from the analytic derivative of the gauge.
Spinor bo_state_derivative(double theta, double xi, const GaugeSpec& gauge);

/// arg<a|b> in (-pi, pi]; throws OrthogonalStatesError when |<a|b>| < tolerance.
double pancharatnam_phase(const Spinor& a, const Spinor& b, double tolerance = 1e-9);

struct PhaseJump {
    double delta_theta;  ///< theta - theta0 where cos(xi dtheta) = 0
    double theta;        ///< theta0 + delta_theta
};

/// All dtheta = (2n+1) pi / (2|xi|) in [lo, hi) (or [lo, hi] when include_hi).
std::vector<PhaseJump> detect_phase_jumps(double xi, double theta0, double lo, double hi,
                                          bool include_hi = false);

struct BerryPhaseResult {
    double theta0 = 0.0;
    double theta = 0.0;
    double gamma_g = 0.0;            ///< (-pi, pi]
    double overlap_modulus = 0.0;    ///< |<-(theta0)|-(theta)>|
    double pancharatnam_term = 0.0;  ///< arg<-(theta0)|-(theta)>
    double connection_term = 0.0;    ///< i int <-|d/dtheta -> dtheta
    std::vector<PhaseJump> jumps;    ///< jump loci crossed between theta0 and theta
    std::string gauge_used;
};

/// gamma_g = arg<-(theta0)|-(theta)> + i int_{theta0}^{theta} <-|d -> dtheta', the
/// connection integrated with composite Simpson on grid_n (rounded up to even) intervals.
/// Throws UndefinedPhaseError within 1e-6 of a jump locus; requires grid_n >= 100.
BerryPhaseResult noncyclic_berry_phase(double xi, double theta0, double theta, const GaugeSpec& gauge,
                                       std::size_t grid_n = 10000);

/// arg cos[xi (theta - theta0)] in {0, pi}.
double noncyclic_phase_closed_form(double xi, double delta_theta);

/// e^{2 pi i xi} for a loop around the intersection; exactly +-1 because 2 xi is an integer.
std::complex<double> mab_phase_factor(double xi);

struct PlanarPoint {
    double x;
    double y;
};

class PlanarPath {
public:
    /// Validates the samples. A closed path must repeat its first point at the end (to 1e-12).
    PlanarPath(std::vector<PlanarPoint> samples, bool closed);

    /// True when the last sample repeats the first one.
    static bool looks_closed(const std::vector<PlanarPoint>& samples);

    /// Circle with n segments (n + 1 samples), wound `turns` times (negative turns reverse it).
    static PlanarPath circle(double cx, double cy, double radius, std::size_t n, int turns = 1);
    /// Axis-aligned ellipse with n segments.
    static PlanarPath ellipse(double cx, double cy, double ax, double ay, std::size_t n, int turns = 1);

    const std::vector<PlanarPoint>& samples() const { return samples_; }
    bool closed() const { return closed_; }

private:
    std::vector<PlanarPoint> samples_;
    bool closed_;
};

struct HolonomyResult {
    double line_integral = 0.0;          ///< xi * total polar-angle change
    long winding = 0;                    ///< closed paths only
    std::complex<double> phase_factor;   ///< e^{i line_integral}
    bool closed = false;
};

/// Accumulates xi times the signed angle between consecutive position vectors. Segments
/// subtending >= pi/2 at the origin are refused (PathTooCoarseError).
HolonomyResult holonomy_line_integral(double xi, const PlanarPath& path);

}  // namespace mab
