#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "paramosc/closed_form.hpp"
#include "paramosc/cpo.hpp"
#include "paramosc/errors.hpp"
#include "paramosc/schedule.hpp"

namespace paramosc {

/// Classical "energies" of the oscillator pair and their ratios to the
/// instantaneous frequency (Omega for the tt variant, omega for the adiabatic
/// one). The ratios reduce to the adiabatic invariants J at both endpoints of
/// a flat-ended schedule.
struct EnergyPair {
    double e_mu;
    double e_nu;
    double j_mu;
    double j_nu;
};

inline EnergyPair energies(const CpoTrajectory& traj, const FrequencySchedule& s, double t) {
    const State<4> y = traj.state_at(t);
    double c_sq, freq;
    if (traj.variant() == OscillatorVariant::tt) {
        freq = detail::big_omega_checked(s, t);
        c_sq = freq * freq;
    } else {
        freq = s.omega(t);
        c_sq = freq * freq;
    }
    EnergyPair ep{};
    ep.e_mu = 0.5 * (y[1] * y[1] + c_sq * y[0] * y[0]);
    ep.e_nu = 0.5 * (y[3] * y[3] + c_sq * y[2] * y[2]);
    ep.j_mu = ep.e_mu / freq;
    ep.j_nu = ep.e_nu / freq;
    return ep;
}

/// Adiabaticity parameter of the transitionless oscillator evaluated from the
/// trajectory without assuming omega_dot(t0) = 0 (general three-term form).
inline double q_tt_general(const CpoTrajectory& traj, const FrequencySchedule& s, double t) {
    detail::require_variant(traj, OscillatorVariant::tt, "q_tt_general needs a tt trajectory");
    const double big0 = detail::big_omega_checked(s, traj.t0());
    const double big = detail::big_omega_checked(s, t);
    const State<4> y = traj.state_at(t);
    const double mu = y[0], mu_dot = y[1], nu = y[2], nu_dot = y[3];
    const EffectiveFrequencies ef = effective_frequencies(s, t);
    const double r = ef.omega_dot / ef.omega;
    const double big_sq = big * big, big0_sq = big0 * big0;

    const double term_mu = big0 * 0.5 * (mu_dot * mu_dot + big_sq * mu * mu) / big;
    const double term_nu = 0.5 * (nu_dot * nu_dot + big_sq * nu * nu) / (big0 * big);
    const double term_cd =
        r *
        (big0_sq * mu_dot * mu + nu_dot * nu + 0.5 * r * (big0_sq * mu * mu + nu * nu)) /
        (big * big0);
    return term_mu + term_nu + term_cd;
}

/// Q^TT as the frequency ratio omega/Omega (valid once omega_dot(t0) = 0).
inline double q_tt_simple(const FrequencySchedule& s, double t) {
    detail::require_flat_start(s);
    return s.omega(t) / detail::big_omega_checked(s, t);
}

/// Q^TT via the amplitude rho = 1/sqrt(omega):
///   (rho_dot^2 + Omega^2 rho^2 + W^2/rho^2) / (2 Omega), W = 1.
inline double q_tt_rho_form(const FrequencySchedule& s, double t) {
    detail::require_flat_start(s);
    const double big = detail::big_omega_checked(s, t);
    const double w = s.omega(t);
    const double rho = 1.0 / std::sqrt(w);
    const double rho_dot = -0.5 * s.omega_dot(t) / (w * std::sqrt(w));
    return (rho_dot * rho_dot + big * big * rho * rho + 1.0 / (rho * rho)) / (2.0 * big);
}

/// Husimi's measure of adiabaticity for the plain (undriven) oscillator.
inline double q_husimi(const CpoTrajectory& traj, const FrequencySchedule& s, double t) {
    detail::require_variant(traj, OscillatorVariant::adiabatic,
                            "q_husimi needs an adiabatic trajectory");
    const EnergyPair ep = energies(traj, s, t);
    const double w0 = s.omega0();
    const double w = s.omega(t);
    return w0 * ep.e_mu / w + ep.e_nu / (w0 * w);
}

enum class InvariantBranch { mu, nu };

/// Ermakov-Lewis invariant along a trajectory; equals W^2/2 = 1/2 when rho
/// solves the matching amplitude equation (W = 1 for these initial conditions).
inline double ermakov_lewis_invariant(const CpoTrajectory& traj, const FrequencySchedule& s,
                                      const Amplitude& rho, InvariantBranch branch,
                                      double t) {
    const double big0 = detail::big_omega_checked(s, traj.t0());
    const State<4> y = traj.state_at(t);
    const double r = rho.value(t), r_dot = rho.dot(t);
    const double x = (branch == InvariantBranch::mu) ? y[0] : y[2];
    const double x_dot = (branch == InvariantBranch::mu) ? y[1] : y[3];
    const double swing = r_dot * x - r * x_dot;
    const double quad = swing * swing + (x * x) / (r * r);
    return (branch == InvariantBranch::mu) ? 0.5 * big0 * quad : 0.5 * quad / big0;
}

/// Time-resolved adiabaticity data behind the comparison figures: q is Q^TT
/// for a tt trajectory (undefined inside Omega^2 <= 0 windows) or Q* for an
/// adiabatic one (always defined).
struct AdiabaticityCurve {
    OscillatorVariant variant = OscillatorVariant::tt;
    std::vector<double> times;
    std::vector<double> q;
    std::vector<EnergyPair> energies;
    std::vector<char> defined;  // 0 where Omega^2 <= 0 made q/energies undefined
};

inline AdiabaticityCurve adiabaticity_curve(const CpoTrajectory& traj,
                                            const FrequencySchedule& s) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    AdiabaticityCurve curve;
    curve.variant = traj.variant();
    curve.times = traj.times();
    curve.q.reserve(curve.times.size());
    curve.energies.reserve(curve.times.size());
    curve.defined.reserve(curve.times.size());
    for (const double t : curve.times) {
        if (traj.variant() == OscillatorVariant::tt &&
            !(effective_frequencies(s, t).big_omega_sq > 0.0)) {
            curve.q.push_back(nan);
            curve.energies.push_back(EnergyPair{nan, nan, nan, nan});
            curve.defined.push_back(0);
            continue;
        }
        curve.energies.push_back(energies(traj, s, t));
        curve.q.push_back(traj.variant() == OscillatorVariant::tt ? q_tt_general(traj, s, t)
                                                                  : q_husimi(traj, s, t));
        curve.defined.push_back(1);
    }
    return curve;
}

}  // namespace paramosc
