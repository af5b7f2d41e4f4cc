#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "paramosc/errors.hpp"
#include "paramosc/quadrature.hpp"
#include "paramosc/schedule.hpp"

namespace paramosc {

namespace detail {

inline void require_flat_start(const FrequencySchedule& s) {
    if (std::abs(s.omega_dot(s.t0())) > 1e-10)
        throw DomainError("precondition violated: omega_dot(t0) must vanish");
}

}  // namespace detail

/// Phase theta(t) = integral of omega from t0 to t, by adaptive quadrature.
/// Requires omega_dot(t0) = 0 (tolerance 1e-10), which makes theta_dot = omega
/// the valid phase of the transitionless oscillator pair.
inline double phase(const FrequencySchedule& s, double t, double quad_tol = 1e-12) {
    detail::require_flat_start(s);
    return integrate_adaptive([&s](double tau) { return s.omega(tau); }, s.t0(), t, quad_tol);
}

/// mu(t) = sin(theta) / sqrt(omega(t0) * omega(t)).
inline double mu_closed(const FrequencySchedule& s, double t, double quad_tol = 1e-12) {
    const double th = phase(s, t, quad_tol);
    return std::sin(th) / std::sqrt(s.omega0() * s.omega(t));
}

/// nu(t) = sqrt(omega(t0) / omega(t)) * cos(theta).
inline double nu_closed(const FrequencySchedule& s, double t, double quad_tol = 1e-12) {
    const double th = phase(s, t, quad_tol);
    return std::sqrt(s.omega0() / s.omega(t)) * std::cos(th);
}

/// Amplitude function with its analytic time derivative.
struct Amplitude {
    std::function<double(double)> value;
    std::function<double(double)> dot;
};

/// rho(t) = 1/sqrt(omega(t)), the closed-form amplitude of a schedule with
/// omega_dot(t0) = 0.
inline Amplitude inverse_sqrt_omega(const FrequencySchedule& s) {
    return Amplitude{
        [s](double t) { return 1.0 / std::sqrt(s.omega(t)); },
        [s](double t) {
            const double w = s.omega(t);
            return -0.5 * s.omega_dot(t) / (w * std::sqrt(w));
        }};
}

/// Residual of the amplitude equation rho_ddot + OmegaTilde^2 rho - W^2/rho^3
/// with W = 1. rho_ddot comes from central differences at step
/// h = 1e-5 * (tf - t0), so the result carries O(h^2) discretization error.
inline double ermakov_residual(const FrequencySchedule& s,
                               const std::function<double(double)>& rho, double t) {
    const double h = 1e-5 * s.duration();
    const double r = rho(t);
    const double rho_ddot = (rho(t + h) - 2.0 * r + rho(t - h)) / (h * h);
    const double f2 = effective_frequencies(s, t).tilde_omega_sq;
    return rho_ddot + f2 * r - 1.0 / (r * r * r);
}

/// Rebuilds (mu, nu) from an amplitude function via
///   theta = integral of W/rho^2,  mu = rho sin(theta)/sqrt(Omega0),
///   nu = sqrt(Omega0) rho cos(theta).
inline std::pair<double, double> phase_amplitude_reconstruct(
    const std::function<double(double)>& rho, double wronskian_value, double omega_t0,
    double t0, double t, double quad_tol = 1e-12) {
    if (!(omega_t0 > 0.0)) throw DomainError("omega_t0 must be positive");
    const auto integrand = [&rho, wronskian_value](double tau) {
        const double r = rho(tau);
        if (!(r > 0.0)) throw DomainError("nonpositive amplitude");
        return wronskian_value / (r * r);
    };
    const double theta = integrate_adaptive(integrand, t0, t, quad_tol);
    const double r = rho(t);
    if (!(r > 0.0)) throw DomainError("nonpositive amplitude");
    const double sq = std::sqrt(omega_t0);
    return {r * std::sin(theta) / sq, sq * r * std::cos(theta)};
}

/// Phase/amplitude view of a schedule. f_sq rebuilds the oscillator frequency
/// from finite differences of theta alone and should reproduce OmegaTilde^2;
/// the stencils are 4th order so that they are exact for the cubic schedule
/// family (theta is then a quartic polynomial of t).
struct PhaseAmplitude {
    std::function<double(double)> theta;
    std::function<double(double)> rho;
    std::function<double(double)> f_sq;
};

inline PhaseAmplitude phase_amplitude_view(const FrequencySchedule& s,
                                           double quad_tol = 1e-14, double fd_step = 1e-2) {
    detail::require_flat_start(s);
    auto theta = [s, quad_tol](double t) {
        return integrate_adaptive([&s](double tau) { return s.omega(tau); }, s.t0(), t,
                                  quad_tol);
    };
    auto rho = [s](double t) { return 1.0 / std::sqrt(s.omega(t)); };
    auto f_sq = [theta, fd_step](double t) {
        const double h = fd_step;
        const double tm3 = theta(t - 3 * h), tm2 = theta(t - 2 * h), tm1 = theta(t - h);
        const double tp1 = theta(t + h), tp2 = theta(t + 2 * h), tp3 = theta(t + 3 * h);
        const double t0v = theta(t);
        const double d1 = (-tp2 + 8.0 * tp1 - 8.0 * tm1 + tm2) / (12.0 * h);
        const double d2 =
            (-tp2 + 16.0 * tp1 - 30.0 * t0v + 16.0 * tm1 - tm2) / (12.0 * h * h);
        const double d3 = (tm3 - 8.0 * tm2 + 13.0 * tm1 - 13.0 * tp1 + 8.0 * tp2 - tp3) /
                          (8.0 * h * h * h);
        return d1 * d1 - 0.75 * (d2 * d2) / (d1 * d1) + 0.5 * d3 / d1;
    };
    return PhaseAmplitude{std::move(theta), std::move(rho), std::move(f_sq)};
}

}  // namespace paramosc
