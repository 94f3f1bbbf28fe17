#include "mab/geometric_phase.hpp"

#include <cmath>
#include <numbers>

#include "mab/phase.hpp"

namespace mab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kJumpExclusion = 1e-6;
constexpr double kOriginExclusion = 1e-9;
constexpr double kClosureTolerance = 1e-12;

void require_order(double xi) {
    if (!std::isfinite(xi) || xi == 0.0) throw DomainError("xi must be finite and nonzero");
}

}  // namespace

Spinor bo_state(double theta, double xi, const GaugeSpec& gauge) {
    const Complex global = std::polar(1.0 / std::numbers::sqrt2, gauge.alpha(theta));
    Spinor psi;
    psi << global * std::polar(1.0, -xi * theta), global * std::polar(1.0, xi * theta);
    return psi;
}

Spinor bo_state_derivative(double theta, double xi, const GaugeSpec& gauge) {
    const Spinor psi = bo_state(theta, xi, gauge);
    const double a = gauge.alpha_prime(theta);
    Spinor d;
    d << Complex(0.0, a - xi) * psi(0), Complex(0.0, a + xi) * psi(1);
    return d;
}

double pancharatnam_phase(const Spinor& a, const Spinor& b, double tolerance) {
    const Complex overlap = a.dot(b);
    if (std::abs(overlap) < tolerance)
        throw OrthogonalStatesError("pancharatnam_phase: states are orthogonal (|<a|b>| = " +
                                    std::to_string(std::abs(overlap)) + ")");
    return wrap_phase(std::arg(overlap));
}

std::vector<PhaseJump> detect_phase_jumps(double xi, double theta0, double lo, double hi, bool include_hi) {
    require_order(xi);
    if (!(hi > lo) && !(include_hi && hi == lo)) throw DomainError("detect_phase_jumps: empty range");
    const double spacing = kPi / std::abs(xi);        // distance between consecutive roots
    const double offset = kPi / (2.0 * std::abs(xi)); // n = 0 root
    // Roots are (2n+1) pi / (2|xi|); the set is symmetric so the sign of xi does not matter.
    const auto first = static_cast<long>(std::floor((lo - offset) / spacing)) - 1;
    std::vector<PhaseJump> jumps;
    for (long n = first;; ++n) {
        const double root = static_cast<double>(2 * n + 1) * kPi / (2.0 * std::abs(xi));
        if (root > hi || (root == hi && !include_hi)) break;
        if (root >= lo) jumps.push_back({root, theta0 + root});
    }
    return jumps;
}

double noncyclic_phase_closed_form(double xi, double delta_theta) {
    return std::cos(xi * delta_theta) >= 0.0 ? 0.0 : kPi;
}

BerryPhaseResult noncyclic_berry_phase(double xi, double theta0, double theta, const GaugeSpec& gauge,
                                       std::size_t grid_n) {
    require_order(xi);
    if (grid_n < 100) throw DomainError("noncyclic_berry_phase: grid_n must be >= 100");
    if (!std::isfinite(theta0) || !std::isfinite(theta)) throw DomainError("angles must be finite");

    const double delta = theta - theta0;
    // Distance from delta to the nearest root (2n+1) pi/(2|xi|).
    const double spacing = kPi / std::abs(xi);
    const double shifted = delta - 0.5 * spacing;
    const double nearest = std::abs(shifted - spacing * std::round(shifted / spacing));
    if (nearest < kJumpExclusion)
        throw UndefinedPhaseError("noncyclic_berry_phase: theta - theta0 lies on a pi-jump locus");

    BerryPhaseResult result;
    result.theta0 = theta0;
    result.theta = theta;
    result.gauge_used = gauge.label();
    result.jumps = delta >= 0.0 ? detect_phase_jumps(xi, theta0, 0.0, delta, true)
                                : detect_phase_jumps(xi, theta0, delta, 0.0, true);

    const Spinor start = bo_state(theta0, xi, gauge);
    const Spinor end = bo_state(theta, xi, gauge);
    result.overlap_modulus = std::abs(start.dot(end));
    result.pancharatnam_term = pancharatnam_phase(start, end);

    // Composite Simpson for i <-|d ->, evaluated from the states themselves.
    const std::size_t intervals = grid_n + (grid_n % 2);
    const double h = delta / static_cast<double>(intervals);
    auto integrand = [&](double t) {
        const Complex inner = bo_state(t, xi, gauge).dot(bo_state_derivative(t, xi, gauge));
        return (Complex(0.0, 1.0) * inner).real();
    };
    double sum = integrand(theta0) + integrand(theta);
    for (std::size_t i = 1; i < intervals; ++i)
        sum += (i % 2 == 1 ? 4.0 : 2.0) * integrand(theta0 + h * static_cast<double>(i));
    result.connection_term = sum * h / 3.0;

    result.gamma_g = wrap_phase(result.pancharatnam_term + result.connection_term);
    return result;
}

std::complex<double> mab_phase_factor(double xi) {
    require_order(xi);
    const double twice = 2.0 * xi;
    if (twice != std::round(twice)) return std::polar(1.0, 2.0 * kPi * xi);
    const auto n = static_cast<long long>(twice);
    return {n % 2 == 0 ? 1.0 : -1.0, 0.0};
}

PlanarPath::PlanarPath(std::vector<PlanarPoint> samples, bool closed)
    : samples_(std::move(samples)), closed_(closed) {
    if (samples_.size() < 2) throw DomainError("planar path needs at least two samples");
    for (const auto& p : samples_) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw DomainError("path samples must be finite");
        if (std::hypot(p.x, p.y) <= kOriginExclusion)
            throw SingularityError("path passes through the conical intersection at the origin");
    }
    if (closed_ && !looks_closed(samples_))
        throw DomainError("closed path must end at its first sample");
}

bool PlanarPath::looks_closed(const std::vector<PlanarPoint>& samples) {
    if (samples.size() < 2) return false;
    const auto& a = samples.front();
    const auto& b = samples.back();
    return std::abs(a.x - b.x) <= kClosureTolerance && std::abs(a.y - b.y) <= kClosureTolerance;
}

PlanarPath PlanarPath::circle(double cx, double cy, double radius, std::size_t n, int turns) {
    return ellipse(cx, cy, radius, radius, n, turns);
}

PlanarPath PlanarPath::ellipse(double cx, double cy, double ax, double ay, std::size_t n, int turns) {
    if (n < 3 || turns == 0) throw DomainError("ellipse needs n >= 3 and nonzero turns");
    std::vector<PlanarPoint> pts;
    pts.reserve(n + 1);
    const double total = 2.0 * kPi * turns;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = total * static_cast<double>(i) / static_cast<double>(n);
        pts.push_back({cx + ax * std::cos(t), cy + ay * std::sin(t)});
    }
    pts.push_back(pts.front());
    return PlanarPath(std::move(pts), true);
}

HolonomyResult holonomy_line_integral(double xi, const PlanarPath& path) {
    require_order(xi);
    const auto& pts = path.samples();
    double total_angle = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto& a = pts[i - 1];
        const auto& b = pts[i];
        const double cross = a.x * b.y - a.y * b.x;
        const double dot = a.x * b.x + a.y * b.y;
        const double step = std::atan2(cross, dot);
        if (std::abs(step) >= 0.5 * kPi)
            throw PathTooCoarseError("path segment " + std::to_string(i) +
                                     " subtends >= pi/2 at the origin; resample the path");
        total_angle += step;
    }
    HolonomyResult result;
    result.closed = path.closed();
    result.line_integral = xi * total_angle;
    if (path.closed()) result.winding = std::lround(total_angle / (2.0 * kPi));
    result.phase_factor = std::polar(1.0, result.line_integral);
    return result;
}

}  // namespace mab
