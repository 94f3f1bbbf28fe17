#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mab/autocorrelation.hpp"
#include "mab/geometric_phase.hpp"
#include "mab/model.hpp"
#include "mab/phase.hpp"
#include "oracles.hpp"

using namespace mab;
using std::numbers::pi;

namespace {

const Complex I{0.0, 1.0};

GaugeSpec random_gauge(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nd(0, 8);
    std::uniform_real_distribution<double> cd(-2.0, 2.0);
    const int n = nd(rng);
    std::vector<double> c(n), s(n);
    for (int i = 0; i < n; ++i) {
        c[i] = cd(rng);
        s[i] = cd(rng);
    }
    return GaugeSpec::fourier(cd(rng), c, s, std::round(cd(rng)));
}

bool near_jump(double xi, double delta, double margin) {
    const double spacing = pi / std::abs(xi);
    const double offset = std::fmod(std::abs(delta) - spacing / 2, spacing);
    const double d = std::min(std::abs(offset), spacing - std::abs(offset));
    return d < margin;
}

}  // namespace

TEST_CASE("born-oppenheimer state") {
    for (double xi : {0.5, -1.0, 1.5}) {
        const Spinor s = bo_state(0.0, xi, GaugeSpec::zero());
        CHECK(std::abs(s(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
        CHECK(std::abs(s(1) - 1.0 / std::sqrt(2.0)) < 1e-15);
    }
    const Spinor s = bo_state(pi, 0.5, GaugeSpec::zero());
    CHECK(std::abs(s(0) + I / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s(1) - I / std::sqrt(2.0)) < 1e-15);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> th(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
        const double xi = (i % 2 ? -1.0 : 0.5) * (1 + i % 3);
        const auto g = random_gauge(rng);
        const double theta = th(rng);
        const Spinor b = bo_state(theta, xi, g);
        CHECK(std::abs(b.norm() - 1.0) < 1e-14);
        // relation to the lower adiabatic state
        const Spinor lower = adiabatic_eigensystem(ModelParams(1.0, xi), 1.0, theta, g).minus;
        CHECK((pauli_z() * b - lower).norm() < 1e-14);
        // analytic derivative against central differences
        const double h = 1e-5;
        const Spinor fd = (bo_state(theta + h, xi, g) - bo_state(theta - h, xi, g)) / (2 * h);
        CHECK((fd - bo_state_derivative(theta, xi, g)).norm() < 1e-6 * (1 + std::abs(g.alpha_prime(theta))));
    }
}

TEST_CASE("pancharatnam phase") {
    const Spinor a = bo_state(0.3, 0.5, GaugeSpec::zero());
    CHECK(pancharatnam_phase(a, a) == 0.0);
    for (double beta : {0.4, -2.0, 3.0, pi}) {
        CHECK(pancharatnam_phase(a, std::exp(I * beta) * a) == doctest::Approx(wrap_phase(beta)));
    }
    CHECK(pancharatnam_phase(a, std::exp(I * (-pi)) * a) == doctest::Approx(pi));
    Spinor b;
    b << a(1), -a(0);
    b = b.conjugate().eval();
    CHECK(std::abs(a.dot(b)) < 1e-15);
    CHECK_THROWS_AS(pancharatnam_phase(a, b), OrthogonalStatesError);
}

TEST_CASE("noncyclic berry phase examples") {
    auto r = noncyclic_berry_phase(0.5, 0.0, pi / 2, GaugeSpec::zero());
    CHECK(std::abs(r.gamma_g) < 1e-12);
    r = noncyclic_berry_phase(0.5, 0.0, pi / 2, GaugeSpec::fourier(1.0, {0.5}, {-1.2}, 2.0));
    CHECK(angular_distance(r.gamma_g, 0.0) < 1e-6);
    r = noncyclic_berry_phase(0.5, 0.0, 3 * pi / 2, GaugeSpec::zero());
    CHECK(angular_distance(r.gamma_g, pi) < 1e-12);
    CHECK(r.jumps.size() == 1);
    r = noncyclic_berry_phase(-1.0, 0.0, pi / 4, GaugeSpec::zero());
    CHECK(std::abs(r.gamma_g) < 1e-12);
    CHECK(r.overlap_modulus == doctest::Approx(0.7071068).epsilon(1e-7));
    CHECK(r.gauge_used == "zero");

    CHECK_THROWS_AS(noncyclic_berry_phase(0.5, 0.0, pi, GaugeSpec::zero()), UndefinedPhaseError);
    CHECK_THROWS_AS(noncyclic_berry_phase(0.5, 1.0, 1.0 + pi + 5e-7, GaugeSpec::zero()), UndefinedPhaseError);
    CHECK_THROWS_AS(noncyclic_berry_phase(-1.0, 0.0, -pi / 2, GaugeSpec::zero()), UndefinedPhaseError);
    CHECK_THROWS_AS(noncyclic_berry_phase(0.5, 0.0, 1.0, GaugeSpec::zero(), 99), DomainError);
    CHECK_NOTHROW(noncyclic_berry_phase(0.5, 0.0, 1.0, GaugeSpec::zero(), 101));
}

TEST_CASE("berry phase is gauge invariant") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> dd(-2 * pi, 4 * pi), t0(-pi, pi);
    for (double xi : {0.5, -1.0}) {
        for (int trial = 0; trial < 20; ++trial) {
            double delta = dd(rng);
            while (near_jump(xi, delta, 0.1)) delta = dd(rng);
            const double theta0 = t0(rng);
            const auto g = random_gauge(rng);
            const auto r = noncyclic_berry_phase(xi, theta0, theta0 + delta, g);
            CHECK(angular_distance(r.gamma_g, noncyclic_phase_closed_form(xi, delta)) < 1e-6);
        }
    }
}

TEST_CASE("individual terms shift with the gauge") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> cd(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double xi = trial % 2 ? -1.0 : 0.5;
        const double theta0 = cd(rng), theta = theta0 + 1.1 * cd(rng);
        if (near_jump(xi, theta - theta0, 0.1)) continue;
        const auto g = GaugeSpec::fourier(cd(rng), {cd(rng)}, {cd(rng)}, std::round(2 * cd(rng)));
        const auto base = noncyclic_berry_phase(xi, theta0, theta, GaugeSpec::zero());
        const auto shifted = noncyclic_berry_phase(xi, theta0, theta, g);
        const double shift = g.alpha(theta) - g.alpha(theta0);
        CHECK(angular_distance(shifted.pancharatnam_term, base.pancharatnam_term + shift) < 1e-8);
        CHECK(std::abs(shifted.connection_term - (base.connection_term - shift)) < 1e-8);
        CHECK(angular_distance(shifted.gamma_g, base.gamma_g) < 1e-8);
    }
}

TEST_CASE("phase jumps") {
    auto j = detect_phase_jumps(0.5, 0.0, 0.0, 2 * pi);
    REQUIRE(j.size() == 1);
    CHECK(j[0].delta_theta == doctest::Approx(pi));
    j = detect_phase_jumps(-1.0, 0.0, 0.0, 2 * pi);
    REQUIRE(j.size() == 2);
    CHECK(j[0].delta_theta == doctest::Approx(pi / 2));
    CHECK(j[1].delta_theta == doctest::Approx(3 * pi / 2));
    CHECK(detect_phase_jumps(0.5, 0.0, 0.0, pi / 2, true).empty());
    CHECK(detect_phase_jumps(0.5, 0.0, 0.0, pi).empty());
    CHECK(detect_phase_jumps(0.5, 0.0, 0.0, pi, true).size() == 1);
    j = detect_phase_jumps(1.5, 0.7, -pi, pi);
    CHECK(j.size() == 3);
    for (const auto& p : j) {
        CHECK(std::abs(std::cos(1.5 * p.delta_theta)) < 1e-12);
        CHECK(p.theta == doctest::Approx(0.7 + p.delta_theta));
    }
    // Every sign change of cos(xi dtheta) on a fine grid is reported.
    for (double xi : {0.5, -1.0, 1.5, 2.0}) {
        const auto found = detect_phase_jumps(xi, 0.0, -7.0, 7.0);
        std::size_t changes = 0;
        for (int i = 0; i < 14000; ++i) {
            const double a = -7.0 + 1e-3 * i, b = a + 1e-3;
            if ((std::cos(xi * a) > 0) != (std::cos(xi * b) > 0)) ++changes;
        }
        CHECK(found.size() == changes);
    }
}

TEST_CASE("closed form and phase factor") {
    CHECK(noncyclic_phase_closed_form(0.5, 1.0) == 0.0);
    CHECK(noncyclic_phase_closed_form(0.5, 4.0) == doctest::Approx(pi));
    CHECK(mab_phase_factor(0.5) == std::complex<double>(-1.0, 0.0));
    CHECK(mab_phase_factor(-1.0) == std::complex<double>(1.0, 0.0));
    CHECK(mab_phase_factor(-1.5) == std::complex<double>(-1.0, 0.0));
    CHECK(mab_phase_factor(2.0) == std::complex<double>(1.0, 0.0));
    for (double xi : {0.5, -1.0, 1.5, -2.5}) CHECK(std::abs(std::abs(mab_phase_factor(xi)) - 1.0) <= 1e-12);
}

TEST_CASE("overlap links to averaged correlations") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> dd(-6.0, 6.0);
    for (int i = 0; i < 100; ++i) {
        const double xi = i % 2 ? -1.0 : 0.5;
        const double delta = dd(rng);
        const double overlap = std::abs(bo_state(0.0, xi, GaugeSpec::zero()).dot(bo_state(delta, xi, GaugeSpec::zero())));
        CHECK(std::abs(overlap * overlap - averaged_closed_form(ModelParams(2.0, xi), delta).c_bar) <= 1e-12);
        if (!near_jump(xi, delta, 1e-3)) {
            const auto r = noncyclic_berry_phase(xi, 0.0, delta, GaugeSpec::zero(), 200);
            CHECK(std::abs(r.overlap_modulus * r.overlap_modulus - averaged_closed_form(ModelParams(2.0, xi), delta).c_bar) <= 1e-12);
        }
    }
}

TEST_CASE("holonomy line integral") {
    auto h = holonomy_line_integral(0.5, PlanarPath::circle(0.0, 0.0, 2.0, 720));
    CHECK(h.line_integral == doctest::Approx(pi).epsilon(1e-12));
    CHECK(h.closed);
    CHECK(h.winding == 1);
    CHECK(std::abs(h.phase_factor - std::complex<double>(-1.0, 0.0)) < 1e-12);

    h = holonomy_line_integral(0.5, PlanarPath::circle(3.0, 0.0, 1.0, 720));
    CHECK(std::abs(h.line_integral) < 1e-12);
    CHECK(h.winding == 0);
    CHECK(std::abs(h.phase_factor - std::complex<double>(1.0, 0.0)) < 1e-12);

    const auto twice = PlanarPath::circle(0.0, 0.0, 1.0, 1440, 2);
    h = holonomy_line_integral(0.5, twice);
    CHECK(h.line_integral == doctest::Approx(2 * pi).epsilon(1e-12));
    CHECK(h.winding == 2);
    CHECK(h.winding == oracle::crossing_winding(twice.samples()));
    CHECK(std::abs(h.phase_factor - std::complex<double>(1.0, 0.0)) < 1e-12);

    const auto reverse = PlanarPath::circle(0.5, -0.2, 1.5, 500, -3);
    h = holonomy_line_integral(-1.0, reverse);
    CHECK(h.winding == -3);
    CHECK(h.winding == oracle::crossing_winding(reverse.samples()));
    CHECK(h.line_integral == doctest::Approx(6 * pi));

    for (int n : {64, 100, 1000, 5000}) {
        CHECK(std::abs(holonomy_line_integral(0.5, PlanarPath::circle(0.0, 0.0, 2.0, n)).line_integral - pi) < 1e-9);
        CHECK(std::abs(holonomy_line_integral(0.5, PlanarPath::ellipse(0.3, 0.1, 3.0, 0.7, n)).line_integral - pi) < 1e-9);
    }

    // Open arc from angle 0 to 2 through the upper half plane.
    std::vector<PlanarPoint> arc;
    for (int i = 0; i <= 50; ++i) arc.push_back({std::cos(0.04 * i), std::sin(0.04 * i)});
    h = holonomy_line_integral(-1.0, PlanarPath(arc, false));
    CHECK_FALSE(h.closed);
    CHECK(h.line_integral == doctest::Approx(-2.0));

    CHECK_THROWS_AS(PlanarPath({{1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}}, false), SingularityError);
    CHECK_THROWS_AS(holonomy_line_integral(0.5, PlanarPath({{1.0, 0.0}, {-1.0, 0.1}, {1.0, 0.0}}, true)), PathTooCoarseError);
    CHECK_THROWS_AS(PlanarPath({{1.0, 0.0}, {0.0, 1.0}, {2.0, 0.0}}, true), DomainError);
    CHECK(PlanarPath::looks_closed(PlanarPath::circle(0, 0, 1, 10).samples()));
}
