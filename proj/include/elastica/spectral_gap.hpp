#pragma once
// Spectral constants of the linearised problem. The quadratic form
//   Q(f) = 4 int f_ss^2 - 10 int f_s^2 + 8 int f^2
// acting on mean-zero functions on the circle of length 2*pi*omega
// diagonalises in the Fourier basis with symbol p(n/omega),
// p(x) = 4x^4 - 10x^2 + 8. Its global minimum over the reals is
// p(sqrt(5)/2) = 7/4, which is never attained on the lattice x = n/omega,
// so every lattice gap lambda_omega sits strictly above 7/4 and the
// deviation delta(omega) = lambda_omega - 7/4 shrinks to zero as omega
// grows. Modes n = 0 (forbidden by the length constraint) and n = +-omega
// (translations, the kernel of I + d^2/dtheta^2) carry no curvature
// perturbation, so the decay rate realisable by curvature modes excludes
// them.

#include "elastica/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace elastica {

inline double p_poly(double x) {
    const double x2 = x * x;
    return 4.0 * x2 * x2 - 10.0 * x2 + 8.0;
}

struct SpectralReport {
    int omega = 0;
    double lambda_omega = 0.0; // min over |n| <= n_max of p(n/omega)
    int argmin_n = 0;          // positive representative (minimum is at +-n)
    double delta_omega = 0.0;  // lambda_omega - 7/4 >= 0
    double realizable_gap = 0.0; // min over n not in {0, +-omega}
    int realizable_argmin = 0;
    double mu_omega = 0.0; // min over n not in {0, +-omega} of |1 - (n/omega)^2|
    int n_max_scanned = 0;
};

// Exhaustive lattice scan. p is increasing for x >= sqrt(5)/2 ~ 1.118, so
// every candidate minimiser satisfies |n| <= 2*omega; n_max below that is
// rejected.
inline SpectralReport lattice_gap(int omega, int n_max = -1) {
    if (omega < 1) throw std::invalid_argument("lattice_gap requires omega >= 1");
    if (n_max < 0) n_max = std::max(2 * omega, 4);
    if (n_max < 2 * omega)
        throw std::invalid_argument("n_max must be at least 2*omega = " + std::to_string(2 * omega) +
                                    " to contain the lattice minimiser");

    SpectralReport rep;
    rep.omega = omega;
    rep.n_max_scanned = n_max;
    rep.lambda_omega = p_poly(0.0);
    rep.argmin_n = 0;
    bool have_realizable = false;
    rep.mu_omega = 0.0;

    for (int n = 0; n <= n_max; ++n) {
        const double x = static_cast<double>(n) / omega;
        const double v = p_poly(x);
        if (v < rep.lambda_omega) {
            rep.lambda_omega = v;
            rep.argmin_n = n;
        }
        if (n != 0 && n != omega) {
            const double mu = std::abs(1.0 - x * x);
            if (!have_realizable || v < rep.realizable_gap) {
                rep.realizable_gap = v;
                rep.realizable_argmin = n;
            }
            if (!have_realizable || mu < rep.mu_omega) rep.mu_omega = mu;
            have_realizable = true;
        }
    }
    rep.delta_omega = rep.lambda_omega - 1.75;
    return rep;
}

// Q(f) for mean-zero samples f on the uniform grid of the length-2*pi*omega
// circle; satisfies Q(f) >= lambda_omega * int f^2.
inline double coercivity_form(std::span<const double> f, int omega) {
    if (omega < 1) throw std::invalid_argument("coercivity_form requires omega >= 1");
    const int m = static_cast<int>(f.size());
    const double period = fourier::two_pi * omega;
    const double dx = period / m;

    double mean_int = 0.0, linf = 0.0;
    for (double v : f) {
        mean_int += v;
        linf = std::max(linf, std::abs(v));
    }
    mean_int *= dx;
    if (std::abs(mean_int) > 1e-10 * std::max(1.0, linf))
        throw std::invalid_argument("coercivity_form requires mean-zero input (residual " +
                                    std::to_string(mean_int) + ")");

    const auto fs = fourier::derivative(f, 1, period);
    const auto fss = fourier::derivative(f, 2, period);
    double i0 = 0.0, i1 = 0.0, i2 = 0.0;
    for (int j = 0; j < m; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        i0 += f[i] * f[i];
        i1 += fs[i] * fs[i];
        i2 += fss[i] * fss[i];
    }
    return (4.0 * i2 - 10.0 * i1 + 8.0 * i0) * dx;
}

} // namespace elastica
