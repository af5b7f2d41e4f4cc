#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "paramosc/cpo.hpp"
#include "paramosc/errors.hpp"
#include "paramosc/schedule.hpp"

namespace paramosc {

namespace detail {

// The regrouped hypergeometric polynomial below cancels heavily for deep
// (k, l) cells (up to ~24 decimal digits at n_max = 80), so it is accumulated
// in 128-bit floats where available.
#if defined(__SIZEOF_FLOAT128__)
using wide_float = __float128;
#else
using wide_float = long double;
#endif

}  // namespace detail

/// Adiabaticity parameter feeding the transition formulas. Undefined while
/// Omega^2 <= 0; defined values satisfy q >= 1 (values within 1e-9 below 1 are
/// treated as roundoff and clamped).
struct QParameter {
    double q = 1.0;
    bool defined = false;

    static QParameter undefined() { return QParameter{}; }

    static QParameter from_value(double q) {
        if (!(q >= 1.0 - 1e-9)) throw DomainError("Q parameter must be >= 1");
        return QParameter{std::max(q, 1.0), true};
    }

    double value() const {
        if (!defined) throw SpectrumError("undefined Q parameter");
        return q;
    }
};

/// Transition probability generating function
///   sqrt(2 / (Q(1-u^2)(1-v^2) + (1+u^2)(1+v^2) - 4uv)).
inline double generating_function(const QParameter& qp, double u, double v) {
    const double q = qp.value();
    const double radicand =
        q * (1.0 - u * u) * (1.0 - v * v) + (1.0 + u * u) * (1.0 + v * v) - 4.0 * u * v;
    if (!(radicand > 0.0)) throw DomainError("generating function radicand is nonpositive");
    return std::sqrt(2.0 / radicand);
}

/// Mean final quantum number out of level n: Q(n + 1/2) - 1/2.
inline double mean_quantum_number(const QParameter& qp, std::size_t n) {
    return qp.value() * (static_cast<double>(n) + 0.5) - 0.5;
}

/// Terminating Gauss series combined with its singular prefactor:
///   ((q-1)/(q+1))^(k+l) * 2F1(-k, -l; c; 2/(1-q))^2,  c in {1/2, 3/2},
/// regrouped into nonnegative powers of (q-1) so that q = 1 is a regular
/// point (the raw 2F1 argument diverges there and is never formed).
inline double hyp2f1_terminating(std::size_t k, std::size_t l, double c,
                                 const QParameter& qp) {
    if (c != 0.5 && c != 1.5) throw DomainError("c must be 1/2 or 3/2");
    const double q = qp.value();
    using WF = detail::wide_float;
    const std::size_t mn = std::min(k, l);
    const WF qm1 = static_cast<WF>(q) - 1;
    const WF qp1 = static_cast<WF>(q) + 1;

    // pow_qm1[j] = (q-1)^j
    std::vector<WF> pow_qm1(mn + 1);
    pow_qm1[0] = 1;
    for (std::size_t j = 1; j <= mn; ++j) pow_qm1[j] = pow_qm1[j - 1] * qm1;

    // G = sum_s C_s (-2)^s (q-1)^(mn-s) with the Gauss-series coefficients
    // C_s = k! l! / ((k-s)! (l-s)! (c)_s s!) built by exact recurrence.
    WF coeff = 1;
    WF neg2pow = 1;
    WF g = 0;
    for (std::size_t s = 0;; ++s) {
        g += coeff * neg2pow * pow_qm1[mn - s];
        if (s == mn) break;
        coeff *= static_cast<WF>(k - s) * static_cast<WF>(l - s) /
                 ((static_cast<WF>(c) + static_cast<WF>(s)) * static_cast<WF>(s + 1));
        neg2pow *= -2;
    }

    WF result = g * g;
    for (std::size_t j = 0; j < k + l - 2 * mn; ++j) result *= qm1;
    for (std::size_t j = 0; j < k + l; ++j) result /= qp1;
    return static_cast<double>(result);
}

/// Exact transition probabilities P^{m,n} for m, n <= n_max, plus the
/// truncated first moments sum_m m P^{m,n} per column.
class TransitionTable {
  public:
    QParameter q() const { return q_; }
    std::size_t n_max() const { return n_max_; }

    double prob(std::size_t m, std::size_t n) const { return probs_[m * (n_max_ + 1) + n]; }
    const std::vector<double>& raw() const { return probs_; }
    const std::vector<double>& mean_m() const { return mean_m_; }

    double column_sum(std::size_t n) const {
        double acc = 0.0;
        for (std::size_t m = n % 2; m <= n_max_; m += 2) acc += prob(m, n);
        return acc;
    }

  private:
    friend TransitionTable probability_table(const QParameter& qp, std::size_t n_max);

    QParameter q_;
    std::size_t n_max_ = 0;
    std::vector<double> probs_;
    std::vector<double> mean_m_;
};

inline constexpr std::size_t kTransitionTableCap = 256;

inline TransitionTable probability_table(const QParameter& qp, std::size_t n_max) {
    const double q = qp.value();
    if (n_max > kTransitionTableCap)
        throw DomainError("n_max exceeds the supported table size");

    TransitionTable table;
    table.q_ = qp;
    table.n_max_ = n_max;
    table.probs_.assign((n_max + 1) * (n_max + 1), 0.0);
    const auto put = [&](std::size_t m, std::size_t n, double p) {
        // guard roundoff just outside [0, 1]
        if (p < 0.0 && p > -1e-9) p = 0.0;
        if (p > 1.0 && p < 1.0 + 1e-9) p = 1.0;
        table.probs_[m * (n_max + 1) + n] = p;
        table.probs_[n * (n_max + 1) + m] = p;
    };

    // half_ratio[k] = (2k-1)!!/(2k)!!
    const std::size_t k_even_max = n_max / 2;
    std::vector<double> half_ratio(k_even_max + 1);
    half_ratio[0] = 1.0;
    for (std::size_t k = 1; k <= k_even_max; ++k)
        half_ratio[k] = half_ratio[k - 1] * (2.0 * k - 1.0) / (2.0 * k);

    const double even_scale = std::sqrt(2.0 / (q + 1.0));
    for (std::size_t k = 0; 2 * k <= n_max; ++k)
        for (std::size_t l = k; 2 * l <= n_max; ++l) {
            const double p = half_ratio[k] * half_ratio[l] * even_scale *
                             hyp2f1_terminating(k, l, 0.5, qp);
            put(2 * k, 2 * l, p);
        }

    const double odd_scale = std::pow(2.0 / (q + 1.0), 1.5);
    for (std::size_t k = 0; 2 * k + 1 <= n_max; ++k)
        for (std::size_t l = k; 2 * l + 1 <= n_max; ++l) {
            const double p = half_ratio[k] * (2.0 * k + 1.0) * half_ratio[l] *
                             (2.0 * l + 1.0) * odd_scale *
                             hyp2f1_terminating(k, l, 1.5, qp);
            put(2 * k + 1, 2 * l + 1, p);
        }

    table.mean_m_.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        double acc = 0.0;
        for (std::size_t m = n % 2; m <= n_max; m += 2)
            acc += static_cast<double>(m) * table.prob(m, n);
        table.mean_m_[n] = acc;
    }
    return table;
}

/// chi^(+-) = Omega0 (Omega mu - i mu_dot) +- i (Omega nu - i nu_dot); the
/// moduli satisfy |chi^(+-)|^2 = 2 Omega Omega0 (Q -+ 1).
inline std::pair<std::complex<double>, std::complex<double>> chi_pm(
    const CpoTrajectory& traj, const FrequencySchedule& s, double t) {
    detail::require_variant(traj, OscillatorVariant::tt, "chi_pm needs a tt trajectory");
    const double big0 = detail::big_omega_checked(s, traj.t0());
    const double big = detail::big_omega_checked(s, t);
    const State<4> y = traj.state_at(t);
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> mu_part = big0 * (big * y[0] - i * y[1]);
    const std::complex<double> nu_part = big * y[2] - i * y[3];
    return {mu_part + i * nu_part, mu_part - i * nu_part};
}

}  // namespace paramosc
