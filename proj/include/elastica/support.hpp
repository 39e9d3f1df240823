#pragma once
// Normal-angle (theta) gauge for strictly locally convex curves.
//
// theta is the direction angle of the outward normal; for a counterclockwise
// convex curve it increases strictly and gains 2*pi*omega per traversal, so
// the tangent-angle map can be inverted. On the uniform theta grid we carry
// the support function h = gamma . e(theta) (e = outward unit normal), its
// derivative, the radius of curvature rho = h + h_{theta theta} = 1/k, the
// first-harmonic (translation) amplitudes a1, a2, and the residual w after
// removing the mean and first harmonics of g = h - 1.

#include "elastica/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace elastica {

struct SupportDecomposition {
    int omega = 0;
    int m_samples = 0;
    std::vector<double> theta;   // absolute normal angles, uniform step 2*pi*omega/m
    std::vector<double> h, h_theta, rho, g, w;
    double a1 = 0.0, a2 = 0.0;

    double grid_step() const { return 2.0 * std::numbers::pi * omega / m_samples; }

    double integrate_dtheta(std::span<const double> f) const {
        double acc = 0.0;
        for (double v : f) acc += v;
        return acc * grid_step();
    }

    double w_norm() const {
        double acc = 0.0;
        for (double v : w) acc += v * v;
        return std::sqrt(acc * grid_step());
    }
};

namespace detail {

// Unwrapped tangent angles along the samples (theta_tangent[0] in (-pi,pi]).
inline std::vector<double> unwrapped_tangent_angles(const GeometricData& geo) {
    const int n = geo.n;
    std::vector<double> ang(static_cast<std::size_t>(n));
    ang[0] = std::atan2(geo.tangent[0].y, geo.tangent[0].x);
    for (int j = 1; j < n; ++j) {
        const double raw = std::atan2(geo.tangent[static_cast<std::size_t>(j)].y,
                                      geo.tangent[static_cast<std::size_t>(j)].x);
        double d = raw - std::atan2(geo.tangent[static_cast<std::size_t>(j - 1)].y,
                                    geo.tangent[static_cast<std::size_t>(j - 1)].x);
        while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
        ang[static_cast<std::size_t>(j)] = ang[static_cast<std::size_t>(j - 1)] + d;
    }
    return ang;
}

} // namespace detail

// Decompose a strictly locally convex curve in the theta gauge. A clockwise
// curve is reversed first (orientation normalisation); a curve with k <= 0
// somewhere is not representable and is rejected.
inline SupportDecomposition support_decomposition(const ClosedCurve& curve, int m_samples = 0) {
    GeometricData geo = compute_geometry(curve);
    if (geo.turning < 0) return support_decomposition(curve.reversed(), m_samples);
    if (geo.turning == 0 || geo.min_k() <= 0.0)
        throw geometry_error("curve is not strictly locally convex; theta gauge unavailable");

    const int n = geo.n;
    const int m = (m_samples > 0) ? m_samples : n;
    if (m % 2 != 0) throw std::invalid_argument("support grid size must be even");
    const int omega = geo.turning;

    // absolute normal angle along the samples and its periodic part
    const std::vector<double> tangent_angle = detail::unwrapped_tangent_angles(geo);
    std::vector<double> phi(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double theta_j = tangent_angle[static_cast<std::size_t>(j)] - 0.5 * std::numbers::pi;
        phi[static_cast<std::size_t>(j)] = theta_j - omega * curve.parameter(j);
    }
    const fourier::LinearPlusPeriodicMap angle_map(omega, fourier::analyze(phi));

    const auto cx = fourier::analyze(curve.x());
    const auto cy = fourier::analyze(curve.y());

    SupportDecomposition dec;
    dec.omega = omega;
    dec.m_samples = m;
    dec.theta.resize(static_cast<std::size_t>(m));
    dec.h.resize(static_cast<std::size_t>(m));

    const double theta0 = angle_map.value(0.0);
    const double step = 2.0 * std::numbers::pi * omega / m;
    double u_lo = 0.0;
    for (int i = 0; i < m; ++i) {
        const double target = theta0 + step * i;
        const double u = (i == 0) ? 0.0 : angle_map.invert(target, u_lo, fourier::two_pi);
        u_lo = u;
        const Vec2 p{fourier::eval(cx, u), fourier::eval(cy, u)};
        dec.theta[static_cast<std::size_t>(i)] = target;
        dec.h[static_cast<std::size_t>(i)] = p.x * std::cos(target) + p.y * std::sin(target);
    }

    const double period = 2.0 * std::numbers::pi * omega;
    dec.h_theta = fourier::derivative(dec.h, 1, period);
    std::vector<double> h_tt = fourier::derivative(dec.h, 2, period);
    dec.rho.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
        dec.rho[static_cast<std::size_t>(i)] = dec.h[static_cast<std::size_t>(i)] + h_tt[static_cast<std::size_t>(i)];

    // translation amplitudes and the first-harmonic-free residual
    const double proj_norm = std::numbers::pi * omega;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < m; ++i) {
        s1 += dec.h[static_cast<std::size_t>(i)] * std::cos(dec.theta[static_cast<std::size_t>(i)]);
        s2 += dec.h[static_cast<std::size_t>(i)] * std::sin(dec.theta[static_cast<std::size_t>(i)]);
    }
    dec.a1 = s1 * step / proj_norm;
    dec.a2 = s2 * step / proj_norm;

    dec.g.resize(static_cast<std::size_t>(m));
    dec.w.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        dec.g[idx] = dec.h[idx] - 1.0;
        dec.w[idx] = dec.g[idx] - dec.a1 * std::cos(dec.theta[idx]) - dec.a2 * std::sin(dec.theta[idx]);
    }
    return dec;
}

// Minkowski reconstruction on the decomposition's own theta grid.
inline ClosedCurve reconstruct_from_support(const SupportDecomposition& dec) {
    const int m = dec.m_samples;
    std::vector<double> xs(static_cast<std::size_t>(m)), ys(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        const double c = std::cos(dec.theta[idx]), s = std::sin(dec.theta[idx]);
        xs[idx] = dec.h[idx] * c - dec.h_theta[idx] * s;
        ys[idx] = dec.h[idx] * s + dec.h_theta[idx] * c;
    }
    return ClosedCurve(std::move(xs), std::move(ys));
}

struct CircleDistance {
    double raw = 0.0;            // L2(dtheta) norm of (h-1) e + h_theta e_perp
    double support_proxy = 0.0;  // sqrt(int (h-1)^2 + h_theta^2 dtheta)
    double frame_residual = 0.0; // |raw^2 - proxy^2|
};

// L2(dtheta) distance to the unit omega-circle centred at the origin.
inline CircleDistance distance_to_omega_circle(const ClosedCurve& curve, int omega) {
    const SupportDecomposition dec = support_decomposition(curve);
    if (dec.omega != omega)
        throw std::invalid_argument("curve has turning number " + std::to_string(dec.omega) +
                                    ", expected " + std::to_string(omega));
    const int m = dec.m_samples;
    double raw2 = 0.0, proxy2 = 0.0;
    for (int i = 0; i < m; ++i) {
        const std::size_t idx = static_cast<std::size_t>(i);
        const double gm = dec.h[idx] - 1.0, ht = dec.h_theta[idx];
        const double c = std::cos(dec.theta[idx]), s = std::sin(dec.theta[idx]);
        const double dx = gm * c - ht * s;
        const double dy = gm * s + ht * c;
        raw2 += dx * dx + dy * dy;
        proxy2 += gm * gm + ht * ht;
    }
    const double h = dec.grid_step();
    CircleDistance d;
    d.raw = std::sqrt(raw2 * h);
    d.support_proxy = std::sqrt(proxy2 * h);
    d.frame_residual = std::abs(raw2 - proxy2) * h;
    return d;
}

} // namespace elastica
