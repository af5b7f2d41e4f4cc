#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "paramosc/errors.hpp"

namespace paramosc {

template <std::size_t N>
using State = std::array<double, N>;

struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_steps = 4'000'000;
};

namespace detail::dopri5 {

// Dormand-Prince RK5(4)7M tableau.
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                        a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                        b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Dense-output weights.
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

}  // namespace detail::dopri5

/// Piecewise-quartic continuous extension of a Dormand-Prince integration.
template <std::size_t N>
class DenseOdeSolution {
  public:
    double t_begin() const { return t0_; }
    double t_end() const { return tf_; }

    State<N> operator()(double t) const {
        const double slack = 1e-12 * std::abs(tf_ - t0_);
        if (t < t0_ - slack || t > tf_ + slack) throw DomainError("time outside solution range");
        t = std::clamp(t, t0_, tf_);
        // locate the segment containing t
        std::size_t lo = 0, hi = segments_.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi + 1) / 2;
            if (segments_[mid].t <= t)
                lo = mid;
            else
                hi = mid - 1;
        }
        const Segment& sg = segments_[lo];
        const double th = std::clamp((t - sg.t) / sg.h, 0.0, 1.0);
        const double th1 = 1.0 - th;
        State<N> y;
        for (std::size_t i = 0; i < N; ++i)
            y[i] = sg.c[0][i] +
                   th * (sg.c[1][i] + th1 * (sg.c[2][i] + th * (sg.c[3][i] + th1 * sg.c[4][i])));
        return y;
    }

  private:
    struct Segment {
        double t, h;
        std::array<State<N>, 5> c;
    };

    template <std::size_t M, typename Rhs>
    friend DenseOdeSolution<M> integrate_dopri5(Rhs rhs, double t0, double tf, State<M> y0,
                                                const OdeOptions& opt);

    double t0_ = 0.0, tf_ = 0.0;
    std::vector<Segment> segments_;
};

/// Adaptive embedded Runge-Kutta 5(4) with dense output.
/// `rhs(t, y)` must return the derivative State<N>.
template <std::size_t N, typename Rhs>
DenseOdeSolution<N> integrate_dopri5(Rhs rhs, double t0, double tf, State<N> y0,
                                     const OdeOptions& opt = {}) {
    namespace tb = detail::dopri5;
    if (!(tf > t0)) throw DomainError("invalid interval: tf must exceed t0");
    if (!(opt.rel_tol > 0.0) || !(opt.abs_tol >= 0.0))
        throw DomainError("tolerances must be positive");

    DenseOdeSolution<N> sol;
    sol.t0_ = t0;
    sol.tf_ = tf;

    double t = t0;
    State<N> y = y0;
    State<N> k1 = rhs(t, y);

    const auto scaled_rms = [&](const State<N>& v, const State<N>& ya, const State<N>& yb) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sk =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            const double q = v[i] / sk;
            acc += q * q;
        }
        return std::sqrt(acc / static_cast<double>(N));
    };

    // initial step size heuristic
    double h;
    {
        const double d0 = scaled_rms(y, y, y);
        const double d1 = scaled_rms(k1, y, y);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, tf - t0);
        State<N> y1;
        for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h0 * k1[i];
        const State<N> f1 = rhs(t + h0, y1);
        State<N> df;
        for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - k1[i];
        const double d2 = scaled_rms(df, y, y) / h0;
        const double dm = std::max(d1, d2);
        const double h1 = (dm <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                        : std::pow(0.01 / dm, 0.2);
        h = std::min({100.0 * h0, h1, tf - t0});
    }

    State<N> k2, k3, k4, k5, k6, k7, yt, y1;
    for (std::size_t step = 0;; ++step) {
        if (step >= opt.max_steps)
            throw IntegrationError("step limit exceeded (stiff or invalid schedule?)");
        if (!(h > 16.0 * std::numeric_limits<double>::epsilon() *
                      std::max(std::abs(t), std::abs(tf))))
            throw IntegrationError("step size underflow");
        const bool last = (t + h >= tf);
        if (last) h = tf - t;

        for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * tb::a21 * k1[i];
        k2 = rhs(t + tb::c2 * h, yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (tb::a31 * k1[i] + tb::a32 * k2[i]);
        k3 = rhs(t + tb::c3 * h, yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (tb::a41 * k1[i] + tb::a42 * k2[i] + tb::a43 * k3[i]);
        k4 = rhs(t + tb::c4 * h, yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (tb::a51 * k1[i] + tb::a52 * k2[i] + tb::a53 * k3[i] +
                                tb::a54 * k4[i]);
        k5 = rhs(t + tb::c5 * h, yt);
        for (std::size_t i = 0; i < N; ++i)
            yt[i] = y[i] + h * (tb::a61 * k1[i] + tb::a62 * k2[i] + tb::a63 * k3[i] +
                                tb::a64 * k4[i] + tb::a65 * k5[i]);
        k6 = rhs(t + h, yt);
        for (std::size_t i = 0; i < N; ++i)
            y1[i] = y[i] + h * (tb::b1 * k1[i] + tb::b3 * k3[i] + tb::b4 * k4[i] +
                                tb::b5 * k5[i] + tb::b6 * k6[i]);
        k7 = rhs(t + h, y1);

        State<N> err;
        for (std::size_t i = 0; i < N; ++i)
            err[i] = h * (tb::e1 * k1[i] + tb::e3 * k3[i] + tb::e4 * k4[i] + tb::e5 * k5[i] +
                          tb::e6 * k6[i] + tb::e7 * k7[i]);
        const double errnorm = scaled_rms(err, y, y1);

        if (errnorm <= 1.0) {
            typename DenseOdeSolution<N>::Segment sg;
            sg.t = t;
            sg.h = h;
            for (std::size_t i = 0; i < N; ++i) {
                const double dy = y1[i] - y[i];
                const double bspl = h * k1[i] - dy;
                sg.c[0][i] = y[i];
                sg.c[1][i] = dy;
                sg.c[2][i] = bspl;
                sg.c[3][i] = dy - h * k7[i] - bspl;
                sg.c[4][i] = h * (tb::d1 * k1[i] + tb::d3 * k3[i] + tb::d4 * k4[i] +
                                  tb::d5 * k5[i] + tb::d6 * k6[i] + tb::d7 * k7[i]);
            }
            sol.segments_.push_back(sg);
            t += h;
            y = y1;
            k1 = k7;  // FSAL
            if (last) break;
        }
        const double factor =
            std::clamp(0.9 * std::pow(std::max(errnorm, 1e-16), -0.2), 0.2, 5.0);
        h = std::min(h * factor, tf - t);
        if (h <= 0.0) break;
    }
    return sol;
}

}  // namespace paramosc
