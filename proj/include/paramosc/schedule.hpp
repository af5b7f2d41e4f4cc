#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "paramosc/errors.hpp"

namespace paramosc {

enum class ScheduleKind { constant, cubic, tabulated };

namespace detail {

/// Clamped cubic spline (zero slope at both ends), C^2 on [t.front(), t.back()].
class ClampedSpline {
  public:
    ClampedSpline() = default;

    ClampedSpline(std::vector<double> t, std::vector<double> y)
        : t_(std::move(t)), y_(std::move(y)) {
        const std::size_t n = t_.size();
        if (n < 3 || y_.size() != n)
            throw DomainError("tabulated schedule needs at least 3 samples");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(t_[i] < t_[i + 1]))
                throw DomainError("tabulated sample times must be strictly increasing");

        // Solve the tridiagonal system for the second derivatives m_i with
        // clamped boundary slopes y'(t0) = y'(tn) = 0.
        std::vector<double> a(n), b(n), c(n), r(n);
        const auto h = [&](std::size_t i) { return t_[i + 1] - t_[i]; };
        const auto slope = [&](std::size_t i) { return (y_[i + 1] - y_[i]) / h(i); };
        b[0] = 2.0 * h(0);
        c[0] = h(0);
        r[0] = 6.0 * (slope(0) - 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            a[i] = h(i - 1);
            b[i] = 2.0 * (h(i - 1) + h(i));
            c[i] = h(i);
            r[i] = 6.0 * (slope(i) - slope(i - 1));
        }
        a[n - 1] = h(n - 2);
        b[n - 1] = 2.0 * h(n - 2);
        r[n - 1] = 6.0 * (0.0 - slope(n - 2));

        m_.assign(n, 0.0);
        std::vector<double> cp(n), rp(n);
        cp[0] = c[0] / b[0];
        rp[0] = r[0] / b[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double den = b[i] - a[i] * cp[i - 1];
            cp[i] = (i + 1 < n) ? c[i] / den : 0.0;
            rp[i] = (r[i] - a[i] * rp[i - 1]) / den;
        }
        m_[n - 1] = rp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) m_[i] = rp[i] - cp[i] * m_[i + 1];
    }

    double front() const { return t_.front(); }
    double back() const { return t_.back(); }

    double value(double t) const {
        const auto [i, a, b, h] = locate(t);
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

    double derivative(double t) const {
        const auto [i, a, b, h] = locate(t);
        return (y_[i + 1] - y_[i]) / h -
               (3.0 * a * a - 1.0) / 6.0 * h * m_[i] + (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
    }

    double second_derivative(double t) const {
        const auto [i, a, b, h] = locate(t);
        return a * m_[i] + b * m_[i + 1];
    }

  private:
    struct Loc {
        std::size_t i;
        double a, b, h;
    };

    Loc locate(double t) const {
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        std::size_t i = (it == t_.begin()) ? 0 : static_cast<std::size_t>(it - t_.begin() - 1);
        i = std::min(i, t_.size() - 2);
        const double h = t_[i + 1] - t_[i];
        const double a = (t_[i + 1] - t) / h;
        return {i, a, 1.0 - a, h};
    }

    std::vector<double> t_, y_, m_;
};

}  // namespace detail

/// Frequency protocol omega(t) > 0 on [t0, tf] with analytic first and second
/// time derivatives. The cubic kind is the smooth ramp with
/// omega(t0) = omega0, omega(tf) = omegaf and zero slope at both ends.
class FrequencySchedule {
  public:
    ScheduleKind kind() const { return kind_; }
    double t0() const { return t0_; }
    double tf() const { return tf_; }
    double omega0() const { return omega(t0_); }
    double omegaf() const { return omega(tf_); }
    double duration() const { return tf_ - t0_; }

    double omega(double t) const {
        check_time(t);
        switch (kind_) {
            case ScheduleKind::constant: return w0_;
            case ScheduleKind::cubic: {
                const double s = (t - t0_) / (tf_ - t0_);
                return w0_ + (wf_ - w0_) * s * s * (3.0 - 2.0 * s);
            }
            case ScheduleKind::tabulated: return spline_.value(t);
        }
        return 0.0;  // unreachable
    }

    double omega_dot(double t) const {
        check_time(t);
        switch (kind_) {
            case ScheduleKind::constant: return 0.0;
            case ScheduleKind::cubic: {
                const double T = tf_ - t0_;
                const double s = (t - t0_) / T;
                return (wf_ - w0_) * 6.0 * s * (1.0 - s) / T;
            }
            case ScheduleKind::tabulated: return spline_.derivative(t);
        }
        return 0.0;
    }

    double omega_ddot(double t) const {
        check_time(t);
        switch (kind_) {
            case ScheduleKind::constant: return 0.0;
            case ScheduleKind::cubic: {
                const double T = tf_ - t0_;
                const double s = (t - t0_) / T;
                return (wf_ - w0_) * 6.0 * (1.0 - 2.0 * s) / (T * T);
            }
            case ScheduleKind::tabulated: return spline_.second_derivative(t);
        }
        return 0.0;
    }

    /// Tabulated sample points (empty unless kind == tabulated).
    const std::vector<std::pair<double, double>>& samples() const { return samples_; }

    friend FrequencySchedule make_constant_schedule(double t0, double tf, double omega0);
    friend FrequencySchedule make_cubic_schedule(double t0, double tf, double omega0,
                                                 double omegaf);
    friend FrequencySchedule make_tabulated_schedule(std::vector<double> times,
                                                     std::vector<double> omegas);

  private:
    FrequencySchedule() = default;

    void check_time(double t) const {
        const double slack = 1e-12 * (tf_ - t0_);
        if (t < t0_ - slack || t > tf_ + slack) throw DomainError("time outside [t0, tf]");
    }

    void check_positive(std::size_t n_dense) const {
        for (std::size_t i = 0; i <= n_dense; ++i) {
            const double t = t0_ + (tf_ - t0_) * static_cast<double>(i) / static_cast<double>(n_dense);
            if (!(omega(t) > 0.0)) throw DomainError("omega must stay positive on [t0, tf]");
        }
    }

    ScheduleKind kind_ = ScheduleKind::constant;
    double t0_ = 0.0, tf_ = 1.0;
    double w0_ = 1.0, wf_ = 1.0;
    detail::ClampedSpline spline_;
    std::vector<std::pair<double, double>> samples_;
};

inline FrequencySchedule make_constant_schedule(double t0, double tf, double omega0) {
    if (!(tf > t0)) throw DomainError("invalid interval: tf must exceed t0");
    if (!(omega0 > 0.0)) throw DomainError("invalid frequency: omega0 must be positive");
    FrequencySchedule s;
    s.kind_ = ScheduleKind::constant;
    s.t0_ = t0;
    s.tf_ = tf;
    s.w0_ = s.wf_ = omega0;
    return s;
}

/// Smooth cubic ramp with omega(t0)=omega0, omega(tf)=omegaf and
/// omega_dot(t0)=omega_dot(tf)=0.
inline FrequencySchedule make_cubic_schedule(double t0, double tf, double omega0,
                                             double omegaf) {
    if (!(tf > t0)) throw DomainError("invalid interval: tf must exceed t0");
    if (!(omega0 > 0.0) || !(omegaf > 0.0))
        throw DomainError("invalid frequency: omega0 and omegaf must be positive");
    FrequencySchedule s;
    s.kind_ = ScheduleKind::cubic;
    s.t0_ = t0;
    s.tf_ = tf;
    s.w0_ = omega0;
    s.wf_ = omegaf;
    s.check_positive(1000);
    return s;
}

/// Tabulated schedule interpolated by a clamped cubic spline (zero end slope,
/// so omega_dot vanishes at both ends and OmegaTilde stays well defined).
inline FrequencySchedule make_tabulated_schedule(std::vector<double> times,
                                                 std::vector<double> omegas) {
    if (times.size() != omegas.size())
        throw DomainError("times and omegas must have equal length");
    FrequencySchedule s;
    s.kind_ = ScheduleKind::tabulated;
    if (times.size() < 3) throw DomainError("tabulated schedule needs at least 3 samples");
    s.t0_ = times.front();
    s.tf_ = times.back();
    if (!(s.tf_ > s.t0_)) throw DomainError("invalid interval: tf must exceed t0");
    s.samples_.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) s.samples_.emplace_back(times[i], omegas[i]);
    s.spline_ = detail::ClampedSpline(std::move(times), std::move(omegas));
    s.check_positive(10 * s.samples_.size());
    return s;
}

/// Frequencies entering the transitionless dynamics at one instant.
/// big_omega_sq (Omega^2) and tilde_omega_sq (OmegaTilde^2) are signed; zeta is
/// only defined while Omega^2 > 0.
struct EffectiveFrequencies {
    double omega;
    double omega_dot;
    double omega_ddot;
    double big_omega_sq;    // omega^2 - (omega_dot/omega)^2 / 4
    double tilde_omega_sq;  // omega^2 - 3/4 (omega_dot/omega)^2 + omega_ddot/(2 omega)
    std::optional<std::complex<double>> zeta;  // 1 - i omega_dot / (2 Omega omega)
};

inline EffectiveFrequencies effective_frequencies(const FrequencySchedule& s, double t) {
    EffectiveFrequencies ef{};
    ef.omega = s.omega(t);
    ef.omega_dot = s.omega_dot(t);
    ef.omega_ddot = s.omega_ddot(t);
    const double r = ef.omega_dot / ef.omega;
    ef.big_omega_sq = ef.omega * ef.omega - 0.25 * r * r;
    ef.tilde_omega_sq = ef.omega * ef.omega - 0.75 * r * r + 0.5 * ef.omega_ddot / ef.omega;
    if (ef.big_omega_sq > 0.0) {
        const double big_omega = std::sqrt(ef.big_omega_sq);
        ef.zeta = std::complex<double>(1.0, -ef.omega_dot / (2.0 * big_omega * ef.omega));
    }
    return ef;
}

/// Time intervals inside [t0, tf] where Omega^2 <= 0 (continuous spectrum of
/// the transitionless Hamiltonian. Edges are refined by bisection to
/// 1e-10 * (tf - t0)).
inline std::vector<std::pair<double, double>> spectrum_validity_intervals(
    const FrequencySchedule& s, std::size_t n_samples) {
    if (n_samples < 2) throw DomainError("n_samples must be at least 2");
    const double t0 = s.t0(), tf = s.tf(), T = tf - t0;
    const auto bad = [&](double t) { return effective_frequencies(s, t).big_omega_sq <= 0.0; };

    // Bisect a sign change bracketed by [a, b]; `a` is on the `a_bad` side.
    const auto refine = [&](double a, double b, bool a_bad) {
        while (b - a > 1e-10 * T) {
            const double m = 0.5 * (a + b);
            if (bad(m) == a_bad)
                a = m;
            else
                b = m;
        }
        return 0.5 * (a + b);
    };

    std::vector<std::pair<double, double>> out;
    const auto grid_time = [&](std::size_t i) {
        return t0 + T * static_cast<double>(i) / static_cast<double>(n_samples - 1);
    };

    bool inside = false;
    double start = t0;
    bool prev_bad = bad(t0);
    if (prev_bad) {
        inside = true;
        start = t0;
    }
    for (std::size_t i = 1; i < n_samples; ++i) {
        const double t = grid_time(i);
        const bool cur_bad = bad(t);
        if (cur_bad != prev_bad) {
            const double edge = refine(grid_time(i - 1), t, prev_bad);
            if (cur_bad) {
                inside = true;
                start = edge;
            } else {
                out.emplace_back(start, edge);
                inside = false;
            }
        }
        prev_bad = cur_bad;
    }
    if (inside) out.emplace_back(start, tf);
    return out;
}

}  // namespace paramosc
