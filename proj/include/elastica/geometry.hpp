#pragma once
// Geometric pipeline for closed plane curves: metric, Frenet frame,
// curvature and its arclength derivatives, and the scalar invariants
// (length, turning number, mean curvature, elastic energy, curvature
// oscillation). Differentiation is trigonometric in the parameter u with
// the chain rule d/ds = |gamma_u|^{-1} d/du; scalars use the trapezoidal
// rule, which is spectrally accurate on periodic data.

#include "elastica/curve.hpp"
#include "elastica/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace elastica {

class geometry_error : public std::runtime_error {
public:
    geometry_error(const std::string& what, int sample = -1) : std::runtime_error(what), sample_index(sample) {}
    int sample_index; // offending sample, or -1 when not sample-specific
};

struct GeometricData {
    int n = 0;
    std::vector<double> metric;          // |gamma_u|
    std::vector<Vec2> tangent, normal;   // unit frame, normal = tangent.rot90()
    std::vector<double> k, ks, kss, ksss;
    std::vector<double> pos_dot_normal;  // gamma . nu per sample
    std::vector<double> pos_dot_tangent; // gamma . tau per sample

    double length = 0.0;
    int turning = 0;               // omega
    double turning_residual = 0.0; // distance of the winding to the nearest integer
    double mean_k = 0.0;           // kbar = 2*pi*omega/L
    double elastic_energy = 0.0;   // int k^2 ds
    double kosc = 0.0;             // L * int (k-kbar)^2 ds
    double e_dev = 0.0;            // int (k-kbar)^2 ds

    // Trapezoidal integral of a sampled field against ds.
    double integrate_ds(std::span<const double> f) const {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += f[static_cast<std::size_t>(j)] * metric[static_cast<std::size_t>(j)];
        return acc * (2.0 * std::numbers::pi / n);
    }

    double integrate_du(std::span<const double> f) const {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += f[static_cast<std::size_t>(j)];
        return acc * (2.0 * std::numbers::pi / n);
    }

    double min_metric_ratio() const {
        auto [lo, hi] = std::minmax_element(metric.begin(), metric.end());
        return *hi / *lo;
    }

    double min_k() const { return *std::min_element(k.begin(), k.end()); }
    double max_abs_k() const {
        double m = 0.0;
        for (double v : k) m = std::max(m, std::abs(v));
        return m;
    }
};

namespace detail {

// Total winding of the sampled direction field (vx, vy) in turns, by
// accumulating wrapped angle increments between consecutive samples.
inline double winding_turns(std::span<const double> vx, std::span<const double> vy) {
    const int n = static_cast<int>(vx.size());
    double total = 0.0;
    double prev = std::atan2(vy[0], vx[0]);
    for (int j = 1; j <= n; ++j) {
        const int i = j % n;
        const double ang = std::atan2(vy[static_cast<std::size_t>(i)], vx[static_cast<std::size_t>(i)]);
        double d = ang - prev;
        while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
        while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
        total += d;
        prev = ang;
    }
    return total / (2.0 * std::numbers::pi);
}

} // namespace detail

inline constexpr double immersion_tolerance = 1e-12;
inline constexpr double turning_residual_tolerance = 1e-3;

inline GeometricData compute_geometry(const ClosedCurve& curve) {
    const int n = curve.size();
    GeometricData g;
    g.n = n;

    auto cx = fourier::analyze(curve.x());
    auto cy = fourier::analyze(curve.y());
    fourier::threshold_filter(cx);
    fourier::threshold_filter(cy);

    auto dx = cx, dy = cy;
    fourier::derivative_spectrum(dx, 1);
    fourier::derivative_spectrum(dy, 1);
    const auto xu = fourier::synthesize(dx);
    const auto yu = fourier::synthesize(dy);

    auto dxx = cx, dyy = cy;
    fourier::derivative_spectrum(dxx, 2);
    fourier::derivative_spectrum(dyy, 2);
    const auto xuu = fourier::synthesize(dxx);
    const auto yuu = fourier::synthesize(dyy);

    g.metric.resize(static_cast<std::size_t>(n));
    g.tangent.resize(static_cast<std::size_t>(n));
    g.normal.resize(static_cast<std::size_t>(n));
    g.k.resize(static_cast<std::size_t>(n));
    g.pos_dot_normal.resize(static_cast<std::size_t>(n));
    g.pos_dot_tangent.resize(static_cast<std::size_t>(n));

    for (int j = 0; j < n; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        const Vec2 gu{xu[i], yu[i]};
        const double m = gu.norm();
        if (!(m > immersion_tolerance))
            throw geometry_error("curve is not immersed: |gamma_u| <= tolerance at sample " + std::to_string(j), j);
        g.metric[i] = m;
        const Vec2 tau = gu * (1.0 / m);
        const Vec2 nu = tau.rot90();
        g.tangent[i] = tau;
        g.normal[i] = nu;
        g.k[i] = gu.cross({xuu[i], yuu[i]}) / (m * m * m);
        const Vec2 p = curve.point(j);
        g.pos_dot_normal[i] = p.dot(nu);
        g.pos_dot_tangent[i] = p.dot(tau);
    }

    // arclength derivatives of k by repeated |gamma_u|^{-1} d/du, with the
    // round-off filter ahead of each differentiation
    auto d_by_ds = [&](const std::vector<double>& f) {
        auto c = fourier::analyze(f);
        fourier::threshold_filter(c);
        fourier::derivative_spectrum(c, 1);
        std::vector<double> out = fourier::synthesize(c);
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] /= g.metric[static_cast<std::size_t>(j)];
        return out;
    };
    g.ks = d_by_ds(g.k);
    g.kss = d_by_ds(g.ks);
    g.ksss = d_by_ds(g.kss);

    std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
    g.length = g.integrate_ds(ones);

    std::vector<double> tx(static_cast<std::size_t>(n)), ty(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        tx[static_cast<std::size_t>(j)] = g.tangent[static_cast<std::size_t>(j)].x;
        ty[static_cast<std::size_t>(j)] = g.tangent[static_cast<std::size_t>(j)].y;
    }
    const double turns = detail::winding_turns(tx, ty);
    g.turning = static_cast<int>(std::lround(turns));
    g.turning_residual = std::abs(turns - g.turning);

    g.mean_k = 2.0 * std::numbers::pi * g.turning / g.length;

    std::vector<double> k2(static_cast<std::size_t>(n)), dev2(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        k2[i] = g.k[i] * g.k[i];
        const double d = g.k[i] - g.mean_k;
        dev2[i] = d * d;
    }
    g.elastic_energy = g.integrate_ds(k2);
    g.e_dev = g.integrate_ds(dev2);
    g.kosc = g.length * g.e_dev;

    return g;
}

struct TurningNumber {
    int omega;
    double residual;
};

inline TurningNumber turning_number_detail(const ClosedCurve& curve) {
    const GeometricData g = compute_geometry(curve);
    return {g.turning, g.turning_residual};
}

// Turning number with the resolution guard: a genuine closed curve always
// winds an integer number of turns, so a large residual means the sampling
// aliases the tangent direction.
inline int turning_number(const ClosedCurve& curve) {
    const TurningNumber t = turning_number_detail(curve);
    if (t.residual > turning_residual_tolerance)
        throw geometry_error("turning number residual " + std::to_string(t.residual) +
                             " exceeds tolerance; curve appears under-resolved");
    return t.omega;
}

} // namespace elastica
