#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "paramosc/cpo.hpp"
#include "paramosc/errors.hpp"
#include "paramosc/schedule.hpp"

namespace paramosc {

/// Uniform symmetric position grid; n_points odd so that x = 0 is a node.
struct PositionGrid {
    double half_width = 10.0;
    std::size_t n_points = 1201;

    double spacing() const { return 2.0 * half_width / static_cast<double>(n_points - 1); }
    double point(std::size_t i) const {
        return -half_width + spacing() * static_cast<double>(i);
    }

    static PositionGrid make_default(double big_omega_t0, double big_omega_t,
                                     std::size_t n_points = 1201) {
        PositionGrid g;
        g.half_width = 10.0 / std::sqrt(std::min(big_omega_t0, big_omega_t));
        g.n_points = n_points;
        return g;
    }
};

/// Instantaneous eigenfunction of the transitionless oscillator,
///   phi_n(x) = (Omega/pi)^(1/4) H_n(sqrt(Omega) x) exp(-zeta Omega x^2 / 2)
///              / sqrt(2^n n!),
/// in units M = hbar = 1. The complex zeta tilts the phase only; Re zeta = 1
/// keeps the family orthonormal.
inline std::complex<double> oscillator_eigenfunction(std::size_t n, double big_omega,
                                                     std::complex<double> zeta, double x) {
    if (!(big_omega > 0.0)) throw SpectrumError("eigenfunction needs Omega > 0");
    if (n > 12) throw DomainError("eigenfunction order capped at n = 12");
    const double xi = std::sqrt(big_omega) * x;
    double h_prev = 1.0, h_cur = 2.0 * xi;  // H_0, H_1
    double hermite = (n == 0) ? h_prev : h_cur;
    for (std::size_t j = 1; j < n; ++j) {
        const double h_next = 2.0 * xi * h_cur - 2.0 * static_cast<double>(j) * h_prev;
        h_prev = h_cur;
        h_cur = h_next;
        hermite = h_next;
    }
    double norm = std::pow(big_omega / std::numbers::pi, 0.25);
    for (std::size_t j = 1; j <= n; ++j) norm /= std::sqrt(2.0 * static_cast<double>(j));
    return norm * hermite * std::exp(-zeta * (0.5 * big_omega * x * x));
}

namespace detail {

struct KernelCoefficients {
    std::complex<double> prefactor;  // sqrt(1 / (2 pi i mu))
    double a, b, c;                  // exponent i (a x^2 + b x x0 + c x0^2)
};

inline KernelCoefficients kernel_coefficients(const CpoTrajectory& traj,
                                              const FrequencySchedule& s, double t) {
    require_variant(traj, OscillatorVariant::tt, "propagator kernel needs a tt trajectory");
    const State<4> y = traj.state_at(t);
    const double mu = y[0], mu_dot = y[1], nu = y[2];
    if (!(std::abs(mu) > 1e-6)) throw DomainError("kernel singular: |mu(t)| <= 1e-6");
    const EffectiveFrequencies ef_t = effective_frequencies(s, t);
    const EffectiveFrequencies ef_0 = effective_frequencies(s, traj.t0());
    KernelCoefficients kc;
    kc.a = 0.5 * (mu_dot / mu + 0.5 * ef_t.omega_dot / ef_t.omega);
    kc.b = -1.0 / mu;
    kc.c = 0.5 * (nu / mu - 0.5 * ef_0.omega_dot / ef_0.omega);
    kc.prefactor =
        std::sqrt(1.0 / (2.0 * std::numbers::pi * std::complex<double>(0.0, 1.0) * mu));
    return kc;
}

}  // namespace detail

/// Gaussian propagator kernel U_{t,t0}(x|x0) of the transitionless oscillator
/// built from the integrated trajectory (M = hbar = 1).
inline std::complex<double> propagator_kernel(const CpoTrajectory& traj,
                                              const FrequencySchedule& s, double t, double x,
                                              double x0) {
    const detail::KernelCoefficients kc = detail::kernel_coefficients(traj, s, t);
    const std::complex<double> phase(0.0, kc.a * x * x + kc.b * x * x0 + kc.c * x0 * x0);
    return kc.prefactor * std::exp(phase);
}

/// Brute-force transition probabilities by double trapezoidal quadrature of
/// |<m;t| U |n;t0>|^2 on the grid, with a Richardson error estimate from the
/// half-resolution subgrid.
struct OracleResult {
    std::vector<double> probs;  // (n_oracle_max+1)^2, row-major [m][n]
    std::size_t n_oracle_max = 0;
    PositionGrid grid;
    double est_error = 0.0;

    double prob(std::size_t m, std::size_t n) const {
        return probs[m * (n_oracle_max + 1) + n];
    }
};

namespace detail {

/// P^{m,n} amplitudes on one grid stride (stride 2 = half resolution).
inline std::vector<std::complex<double>> oracle_amplitudes(
    const CpoTrajectory& traj, const FrequencySchedule& s, double t, std::size_t n_max,
    const PositionGrid& grid, std::size_t stride) {
    const EffectiveFrequencies ef_t = effective_frequencies(s, t);
    const EffectiveFrequencies ef_0 = effective_frequencies(s, traj.t0());
    const double big_t = std::sqrt(ef_t.big_omega_sq);
    const double big_0 = std::sqrt(ef_0.big_omega_sq);
    const KernelCoefficients kc = kernel_coefficients(traj, s, t);

    const std::size_t np = (grid.n_points - 1) / stride + 1;
    const double dx = grid.spacing() * static_cast<double>(stride);
    std::vector<double> xs(np);
    std::vector<double> w(np, dx);
    w.front() = w.back() = 0.5 * dx;
    for (std::size_t i = 0; i < np; ++i) xs[i] = grid.point(i * stride);

    // weighted eigenfunction samples at t (conjugated) and t0
    const std::size_t nb = n_max + 1;
    std::vector<std::complex<double>> bra(nb * np), ket(nb * np);
    for (std::size_t m = 0; m < nb; ++m)
        for (std::size_t i = 0; i < np; ++i) {
            bra[m * np + i] =
                std::conj(oscillator_eigenfunction(m, big_t, *ef_t.zeta, xs[i])) * w[i];
            ket[m * np + i] =
                oscillator_eigenfunction(m, big_0, *ef_0.zeta, xs[i]) * w[i];
        }

    // phase factors exp(i a x^2) and running exp(i b x x0) per kernel column
    std::vector<std::complex<double>> col(np);
    std::vector<std::complex<double>> quad_x(np);
    for (std::size_t i = 0; i < np; ++i)
        quad_x[i] = std::exp(std::complex<double>(0.0, kc.a * xs[i] * xs[i]));

    std::vector<std::complex<double>> amp(nb * nb, 0.0);
    std::vector<std::complex<double>> m_acc(nb);
    for (std::size_t j = 0; j < np; ++j) {
        const double x0 = xs[j];
        const std::complex<double> quad_x0 =
            std::exp(std::complex<double>(0.0, kc.c * x0 * x0));
        for (std::size_t i = 0; i < np; ++i)
            col[i] = kc.prefactor * quad_x[i] *
                     std::exp(std::complex<double>(0.0, kc.b * xs[i] * x0)) * quad_x0;
        for (std::size_t m = 0; m < nb; ++m) {
            std::complex<double> acc = 0.0;
            const std::complex<double>* brow = &bra[m * np];
            for (std::size_t i = 0; i < np; ++i) acc += brow[i] * col[i];
            m_acc[m] = acc;
        }
        for (std::size_t m = 0; m < nb; ++m)
            for (std::size_t n = 0; n < nb; ++n) amp[m * nb + n] += m_acc[m] * ket[n * np + j];
    }
    return amp;
}

}  // namespace detail

inline OracleResult oracle_probabilities(const CpoTrajectory& traj,
                                         const FrequencySchedule& s, double t,
                                         std::size_t n_oracle_max, const PositionGrid& grid) {
    if (n_oracle_max > 6) throw DomainError("oracle order capped at n = 6");
    if (grid.n_points % 2 == 0) throw DomainError("grid needs an odd number of points");
    const double big_sq_t = effective_frequencies(s, t).big_omega_sq;
    const double big_sq_0 = effective_frequencies(s, traj.t0()).big_omega_sq;
    if (!(big_sq_t > 0.0) || !(big_sq_0 > 0.0))
        throw SpectrumError("oracle needs Omega^2 > 0 at t0 and t");
    // eigenfunction Gaussian width is 1/sqrt(Omega)
    if (grid.half_width * 1.0000001 < 8.0 / std::pow(std::min(big_sq_0, big_sq_t), 0.25))
        throw DomainError("grid too narrow to hold the eigenfunction support");

    const std::size_t nb = n_oracle_max + 1;
    const auto amp_full = detail::oracle_amplitudes(traj, s, t, n_oracle_max, grid, 1);
    const auto amp_half = detail::oracle_amplitudes(traj, s, t, n_oracle_max, grid, 2);

    OracleResult res;
    res.n_oracle_max = n_oracle_max;
    res.grid = grid;
    res.probs.assign(nb * nb, 0.0);
    double est = 0.0;
    for (std::size_t m = 0; m < nb; ++m)
        for (std::size_t n = 0; n < nb; ++n) {
            const double p = std::norm(amp_full[m * nb + n]);
            const double p_half = std::norm(amp_half[m * nb + n]);
            res.probs[m * nb + n] = p;
            est = std::max(est, std::abs(p - p_half) / 3.0);
        }
    res.est_error = est;
    return res;
}

}  // namespace paramosc
