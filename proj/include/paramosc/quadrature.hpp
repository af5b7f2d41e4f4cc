#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "paramosc/errors.hpp"

namespace paramosc {

namespace detail::gk15 {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
std::pair<double, double> panel(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = wgk[7] * fc;
    double g7 = wg[3] * fc;
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = hl * xgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        k15 += wgk[j] * fsum;
        if (j % 2 == 1) g7 += wg[j / 2] * fsum;
    }
    k15 *= hl;
    g7 *= hl;
    return {k15, std::abs(k15 - g7)};
}

}  // namespace detail::gk15

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b] to the given
/// absolute tolerance.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                          int max_depth = 48) {
    if (a == b) return 0.0;
    struct Rec {
        const F& f;
        double tol;
        double run(double lo, double hi, double tol_local, int depth) const {
            auto [val, err] = detail::gk15::panel(f, lo, hi);
            if (err <= tol_local || depth <= 0) return val;
            const double mid = 0.5 * (lo + hi);
            return run(lo, mid, 0.5 * tol_local, depth - 1) +
                   run(mid, hi, 0.5 * tol_local, depth - 1);
        }
    };
    const double sign = (b > a) ? 1.0 : -1.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    Rec rec{f, abs_tol};
    return sign * rec.run(lo, hi, abs_tol, max_depth);
}

}  // namespace paramosc
