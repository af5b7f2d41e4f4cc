#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "paramosc/errors.hpp"
#include "paramosc/ode.hpp"
#include "paramosc/schedule.hpp"

namespace paramosc {

/// Which frequency drives the classical parametric oscillator pair:
/// tt uses OmegaTilde^2 (counterdiabatically driven), adiabatic uses omega^2.
enum class OscillatorVariant { tt, adiabatic };

inline const char* to_string(OscillatorVariant v) {
    return v == OscillatorVariant::tt ? "tt" : "adiabatic";
}

class CpoTrajectory;

namespace detail {

inline double big_omega_checked(const FrequencySchedule& s, double t) {
    const double b2 = effective_frequencies(s, t).big_omega_sq;
    if (!(b2 > 0.0)) throw SpectrumError("Omega^2 <= 0: discrete spectrum undefined");
    return std::sqrt(b2);
}

template <typename Traj>
void require_variant(const Traj& traj, OscillatorVariant v, const char* what) {
    if (traj.variant() != v) throw DomainError(what);
}

}  // namespace detail

/// One integrated oscillator pair: mu with (mu, mu_dot)(t0) = (0, 1) and nu
/// with (nu, nu_dot)(t0) = (1, 0), sampled on a uniform grid plus a dense
/// interpolant for arbitrary times. The Wronskian mu_dot*nu - mu*nu_dot must
/// stay at 1; the observed worst deviation over the sample grid is recorded.
class CpoTrajectory {
  public:
    OscillatorVariant variant() const { return variant_; }
    double t0() const { return dense_.t_begin(); }
    double tf() const { return dense_.t_end(); }

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& mu() const { return mu_; }
    const std::vector<double>& mu_dot() const { return mu_dot_; }
    const std::vector<double>& nu() const { return nu_; }
    const std::vector<double>& nu_dot() const { return nu_dot_; }
    double wronskian_max_drift() const { return wronskian_max_drift_; }

    /// Interpolated (mu, mu_dot, nu, nu_dot) at any t in [t0, tf].
    State<4> state_at(double t) const { return dense_(t); }

  private:
    friend CpoTrajectory integrate_cpo(const FrequencySchedule& s, OscillatorVariant variant,
                                       double rel_tol, std::size_t n_output);

    OscillatorVariant variant_ = OscillatorVariant::tt;
    DenseOdeSolution<4> dense_;
    std::vector<double> times_, mu_, mu_dot_, nu_, nu_dot_;
    double wronskian_max_drift_ = 0.0;
};

/// Integrates both oscillator solutions over [t0, tf] of the schedule and
/// samples them at n_output equally spaced times. Fails if the Wronskian
/// drifts by 100 * rel_tol or more anywhere on the sample grid.
inline CpoTrajectory integrate_cpo(const FrequencySchedule& s, OscillatorVariant variant,
                                   double rel_tol = 1e-10, std::size_t n_output = 1000) {
    if (!(rel_tol >= 1e-13 && rel_tol <= 1e-3))
        throw DomainError("rel_tol must lie in [1e-13, 1e-3]");
    if (n_output < 2) throw DomainError("n_output must be at least 2");

    const auto rhs = [&s, variant](double t, const State<4>& y) {
        const EffectiveFrequencies ef = effective_frequencies(s, t);
        const double c2 = (variant == OscillatorVariant::tt)
                              ? ef.tilde_omega_sq
                              : ef.omega * ef.omega;
        return State<4>{y[1], -c2 * y[0], y[3], -c2 * y[2]};
    };

    OdeOptions opt;
    opt.rel_tol = rel_tol;
    opt.abs_tol = 0.01 * rel_tol;

    CpoTrajectory traj;
    traj.variant_ = variant;
    traj.dense_ = integrate_dopri5<4>(rhs, s.t0(), s.tf(), State<4>{0.0, 1.0, 1.0, 0.0}, opt);

    traj.times_.resize(n_output);
    traj.mu_.resize(n_output);
    traj.mu_dot_.resize(n_output);
    traj.nu_.resize(n_output);
    traj.nu_dot_.resize(n_output);
    double drift = 0.0;
    for (std::size_t i = 0; i < n_output; ++i) {
        const double t = s.t0() + (s.tf() - s.t0()) * static_cast<double>(i) /
                                      static_cast<double>(n_output - 1);
        const State<4> y = traj.dense_(t);
        traj.times_[i] = t;
        traj.mu_[i] = y[0];
        traj.mu_dot_[i] = y[1];
        traj.nu_[i] = y[2];
        traj.nu_dot_[i] = y[3];
        drift = std::max(drift, std::abs(y[1] * y[2] - y[0] * y[3] - 1.0));
    }
    traj.wronskian_max_drift_ = drift;
    if (!(drift < 100.0 * rel_tol))
        throw IntegrationError("Wronskian drift exceeds 100 * rel_tol");
    return traj;
}

/// Interpolated Wronskian mu_dot*nu - mu*nu_dot at time t.
inline double wronskian(const CpoTrajectory& traj, double t) {
    const State<4> y = traj.state_at(t);
    return y[1] * y[2] - y[0] * y[3];
}

}  // namespace paramosc
