#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "paramosc/closed_form.hpp"
#include "paramosc/cpo.hpp"
#include "paramosc/ode.hpp"

using namespace paramosc;

TEST_CASE("phase of a constant schedule is omega * (t - t0)") {
    const auto s = make_constant_schedule(0.0, 2.0, 3.0);
    CHECK(phase(s, 1.0) == Catch::Approx(3.0).epsilon(1e-13));
    CHECK(phase(s, 0.0) == 0.0);
}

TEST_CASE("phase of the reference ramps is 3*t at the endpoint") {
    // integral of the smooth ramp from 2 to 4 equals the 3*T mean exactly
    for (double tf : {0.2, 0.5, 2.0}) {
        const auto s = make_cubic_schedule(0.0, tf, 2.0, 4.0);
        CHECK(phase(s, tf, 1e-14) == Catch::Approx(3.0 * tf).epsilon(1e-14));
    }
}

TEST_CASE("phase agrees with an independent ODE integration of theta_dot = omega") {
    const auto s = make_cubic_schedule(0.0, 2.0, 2.0, 4.0);
    const auto rhs = [&s](double t, const State<1>&) { return State<1>{s.omega(t)}; };
    OdeOptions opt;
    opt.rel_tol = 1e-12;
    opt.abs_tol = 1e-14;
    const auto sol = integrate_dopri5<1>(rhs, 0.0, 2.0, State<1>{0.0}, opt);
    for (double t : {0.31, 0.77, 1.23, 1.9, 2.0})
        CHECK(phase(s, t, 1e-13) == Catch::Approx(sol(t)[0]).margin(1e-10));
}

TEST_CASE("closed-form mu and nu at analytic spot points") {
    SECTION("constant omega") {
        const auto s = make_constant_schedule(0.0, 2.0, 3.0);
        const double pi = 3.14159265358979323846;
        CHECK(mu_closed(s, pi / 6.0) == Catch::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(nu_closed(s, pi / 3.0) == Catch::Approx(-1.0).epsilon(1e-12));
    }
    SECTION("t0 start values") {
        const auto s = make_cubic_schedule(0.0, 0.5, 2.0, 4.0);
        CHECK(mu_closed(s, 0.0) == 0.0);
        CHECK(nu_closed(s, 0.0) == 1.0);
    }
    SECTION("frozen 60-digit references at interior times") {
        const auto s05 = make_cubic_schedule(0.0, 0.5, 2.0, 4.0);
        CHECK(mu_closed(s05, 0.3) == Catch::Approx(0.26583026588081486).epsilon(1e-13));
        CHECK(nu_closed(s05, 0.3) == Catch::Approx(0.56932696710396171).epsilon(1e-13));
        const auto s20 = make_cubic_schedule(0.0, 2.0, 2.0, 4.0);
        CHECK(mu_closed(s20, 1.0) == Catch::Approx(0.28319572841529340).epsilon(1e-13));
        CHECK(nu_closed(s20, 1.0) == Catch::Approx(-0.58810490926023750).epsilon(1e-13));
    }
}

TEST_CASE("closed forms match the integrated trajectories pointwise") {
    for (double tf : {0.2, 0.5, 2.0}) {
        const auto s = make_cubic_schedule(0.0, tf, 2.0, 4.0);
        const auto traj = integrate_cpo(s, OscillatorVariant::tt, 1e-11, 400);
        double worst = 0.0;
        for (std::size_t i = 0; i < traj.times().size(); ++i) {
            const double t = traj.times()[i];
            worst = std::max(worst, std::abs(mu_closed(s, t) - traj.mu()[i]));
            worst = std::max(worst, std::abs(nu_closed(s, t) - traj.nu()[i]));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("tabulated schedules keep the flat-start precondition satisfiable") {
    // Sample the steep half of a wider ramp; the raw data has slope ~3 at its
    // first sample, but the clamped spline flattens both ends so the phase
    // precondition omega_dot(t0) = 0 holds for every constructible schedule.
    const auto full = make_cubic_schedule(-0.5, 0.5, 2.0, 4.0);
    std::vector<double> ts, ws;
    for (int i = 0; i <= 60; ++i) {
        const double t = 0.5 * i / 60.0;
        ts.push_back(t);
        ws.push_back(full.omega(t));
    }
    const auto tab = make_tabulated_schedule(ts, ws);
    CHECK(std::abs(tab.omega_dot(0.0)) < 1e-10);
    CHECK_NOTHROW(phase(tab, 0.25));
}

TEST_CASE("ermakov residual") {
    SECTION("rho = 1/sqrt(omega) solves the equation for constant omega exactly") {
        const auto s = make_constant_schedule(0.0, 2.0, 3.0);
        const auto rho = inverse_sqrt_omega(s);
        CHECK(ermakov_residual(s, rho.value, 1.0) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("rho = 1/sqrt(omega) solves it for the slow ramp to FD accuracy") {
        const auto s = make_cubic_schedule(0.0, 2.0, 2.0, 4.0);
        const auto rho = inverse_sqrt_omega(s);
        for (double t : {0.4, 0.9, 1.3, 1.8})
            CHECK(std::abs(ermakov_residual(s, rho.value, t)) < 1e-5);
    }
    SECTION("scaled amplitude gives the hand-computed residual") {
        // rho = 2/sqrt(1): residual = 0 + 1*2 - 1/8 = 1.875 for omega = 1
        const auto s = make_constant_schedule(0.0, 2.0, 1.0);
        const auto rho = [](double) { return 2.0; };
        CHECK(ermakov_residual(s, rho, 1.0) == Catch::Approx(1.875).margin(1e-12));
    }
}

TEST_CASE("phase-amplitude reconstruction") {
    SECTION("reproduces the closed forms for constant omega") {
        const auto s = make_constant_schedule(0.0, 2.0, 3.0);
        const auto rho = inverse_sqrt_omega(s);
        for (double t : {0.2, 0.9, 1.7}) {
            const auto [mu, nu] = phase_amplitude_reconstruct(rho.value, 1.0, 3.0, 0.0, t);
            CHECK(mu == Catch::Approx(mu_closed(s, t)).margin(1e-12));
            CHECK(nu == Catch::Approx(nu_closed(s, t)).margin(1e-12));
        }
    }
    SECTION("reproduces the closed forms for the fast ramp") {
        const auto s = make_cubic_schedule(0.0, 0.5, 2.0, 4.0);
        const auto rho = inverse_sqrt_omega(s);
        for (double t : {0.1, 0.25, 0.4, 0.5}) {
            const auto [mu, nu] =
                phase_amplitude_reconstruct(rho.value, 1.0, s.omega0(), 0.0, t);
            CHECK(mu == Catch::Approx(mu_closed(s, t)).margin(1e-11));
            CHECK(nu == Catch::Approx(nu_closed(s, t)).margin(1e-11));
        }
    }
    SECTION("reconstructed pair keeps a unit Wronskian (FD derivatives)") {
        const auto s = make_cubic_schedule(0.0, 0.5, 2.0, 4.0);
        const auto rho = inverse_sqrt_omega(s);
        std::mt19937 rng(77);
        std::uniform_real_distribution<double> dist(0.01, 0.49);
        const double h = 1e-6;
        for (int i = 0; i < 50; ++i) {
            const double t = dist(rng);
            const auto [mu_m, nu_m] =
                phase_amplitude_reconstruct(rho.value, 1.0, 2.0, 0.0, t - h, 1e-14);
            const auto [mu_p, nu_p] =
                phase_amplitude_reconstruct(rho.value, 1.0, 2.0, 0.0, t + h, 1e-14);
            const auto [mu, nu] = phase_amplitude_reconstruct(rho.value, 1.0, 2.0, 0.0, t, 1e-14);
            const double mu_dot = (mu_p - mu_m) / (2 * h);
            const double nu_dot = (nu_p - nu_m) / (2 * h);
            CHECK(mu_dot * nu - mu * nu_dot == Catch::Approx(1.0).margin(1e-8));
        }
    }
    SECTION("nonpositive amplitude is rejected") {
        const auto rho = [](double t) { return 0.5 - t; };
        CHECK_THROWS_AS(phase_amplitude_reconstruct(rho, 1.0, 2.0, 0.0, 0.9), DomainError);
    }
}

TEST_CASE("Wronskian identity W = rho^2 theta_dot = 1 on the closed-form branch") {
    const auto s = make_cubic_schedule(0.0, 2.0, 2.0, 4.0);
    // theta_dot = omega and rho = 1/sqrt(omega) give W = 1 identically
    for (double t : {0.1, 0.7, 1.5, 2.0}) {
        const double rho = 1.0 / std::sqrt(s.omega(t));
        CHECK(rho * rho * s.omega(t) == Catch::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("the amplitude built from the trajectory pair equals 1/sqrt(omega)") {
    // rho = sqrt((Omega0^2 mu^2 + nu^2)/Omega0) collapses to 1/sqrt(omega)
    // along the driven pair when the schedule starts flat
    for (double tf : {0.5, 2.0}) {
        const auto s = make_cubic_schedule(0.0, tf, 2.0, 4.0);
        const auto traj = integrate_cpo(s, OscillatorVariant::tt, 1e-11, 200);
        const double big0 = s.omega0();
        for (std::size_t i = 0; i < traj.times().size(); i += 5) {
            const double mu = traj.mu()[i], nu = traj.nu()[i];
            const double rho_pair = std::sqrt((big0 * big0 * mu * mu + nu * nu) / big0);
            const double rho_closed = 1.0 / std::sqrt(s.omega(traj.times()[i]));
            CHECK(rho_pair == Catch::Approx(rho_closed).margin(1e-8));
        }
    }
}

TEST_CASE("f rebuilt from theta equals OmegaTilde") {
    // 4th-order stencils are exact for the quartic theta of a cubic ramp, so
    // only roundoff separates f(theta) from OmegaTilde.
    for (double tf : {0.5, 2.0}) {
        const auto s = make_cubic_schedule(0.0, tf, 2.0, 4.0);
        const auto pa = phase_amplitude_view(s, 1e-15, 1e-2 * tf);
        for (double frac : {0.15, 0.35, 0.5, 0.65, 0.85}) {
            const double t = tf * frac;
            const double f_sq = pa.f_sq(t);
            const double ref = effective_frequencies(s, t).tilde_omega_sq;
            CHECK(std::abs(std::sqrt(f_sq) - std::sqrt(ref)) < 1e-6);
        }
    }
}
