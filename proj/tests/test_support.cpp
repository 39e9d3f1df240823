#include "elastica/scenarios.hpp"
#include "elastica/support.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace elastica;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_CASE("centred unit circle decomposes trivially", "[support]") {
    const auto dec = support_decomposition(omega_circle(1, 1.0, 128));
    CHECK(dec.omega == 1);
    for (double h : dec.h) CHECK_THAT(h, WithinAbs(1.0, 1e-12));
    CHECK_THAT(dec.a1, WithinAbs(0.0, 1e-12));
    CHECK_THAT(dec.a2, WithinAbs(0.0, 1e-12));
    for (double w : dec.w) CHECK_THAT(w, WithinAbs(0.0, 1e-11));
}

TEST_CASE("translated circle puts the offset into the first harmonics", "[support]") {
    const double c = 0.1;
    const auto dec = support_decomposition(translated_circle({c, 0.0}, 1, 1.0, 128));
    CHECK_THAT(dec.a1, WithinAbs(c, 1e-8));
    CHECK_THAT(dec.a2, WithinAbs(0.0, 1e-10));
    CHECK(dec.w_norm() <= 1e-8);

    // oracle: a1 = (1/pi) int (1 + c cos t) cos t dt = c
    const double direct = oracles::adaptive_simpson(
                              [&](double t) { return (1.0 + c * std::cos(t)) * std::cos(t); }, 0.0,
                              2.0 * pi, 1e-13) /
                          pi;
    CHECK_THAT(direct, WithinAbs(c, 1e-10));
}

TEST_CASE("higher harmonic of a perturbed 2-circle lands entirely in w", "[support]") {
    const double eps = 1e-2;
    const auto dec = support_decomposition(perturbed_omega_circle(2, 3, eps, 0.0, 128));
    CHECK(dec.omega == 2);
    CHECK_THAT(dec.a1, WithinAbs(0.0, 1e-8));
    CHECK_THAT(dec.a2, WithinAbs(0.0, 1e-8));
    // |w|^2 = eps^2 * int cos^2(3 theta/2) dtheta over [0, 4pi) = eps^2 * 2 pi
    CHECK_THAT(dec.w_norm() * dec.w_norm(), WithinRel(eps * eps * 2.0 * pi, 0.02));
}

TEST_CASE("support invariants on a random convex curve", "[support]") {
    const auto curve = random_convex_curve(42, 1, 256);
    const auto dec = support_decomposition(curve);

    // length constraint: here L = 2 pi omega by construction, so
    // int (rho - 1) dtheta = 0
    std::vector<double> rho_m1(dec.rho.size());
    for (std::size_t i = 0; i < dec.rho.size(); ++i) rho_m1[i] = dec.rho[i] - 1.0;
    CHECK_THAT(dec.integrate_dtheta(rho_m1), WithinAbs(0.0, 1e-8));

    // w is orthogonal to the kernel directions and to constants
    std::vector<double> wc(dec.w.size()), ws(dec.w.size());
    for (std::size_t i = 0; i < dec.w.size(); ++i) {
        wc[i] = dec.w[i] * std::cos(dec.theta[i]);
        ws[i] = dec.w[i] * std::sin(dec.theta[i]);
    }
    CHECK_THAT(dec.integrate_dtheta(dec.w), WithinAbs(0.0, 1e-10));
    CHECK_THAT(dec.integrate_dtheta(wc), WithinAbs(0.0, 1e-10));
    CHECK_THAT(dec.integrate_dtheta(ws), WithinAbs(0.0, 1e-10));

    // rho * k = 1 pointwise, with k interpolated at the grid points found
    // through the reconstructed positions
    const auto g = compute_geometry(curve);
    const auto ck = fourier::analyze(g.k);
    const auto cx = fourier::analyze(curve.x());
    const auto cy = fourier::analyze(curve.y());
    for (int i = 0; i < dec.m_samples; i += 7) {
        const std::size_t idx = static_cast<std::size_t>(i);
        const Vec2 p{dec.h[idx] * std::cos(dec.theta[idx]) - dec.h_theta[idx] * std::sin(dec.theta[idx]),
                     dec.h[idx] * std::sin(dec.theta[idx]) + dec.h_theta[idx] * std::cos(dec.theta[idx])};
        double best_u = 0.0, best_d = 1e300;
        for (int s = 0; s < 4096; ++s) {
            const double u = fourier::two_pi * s / 4096;
            const double ddx = fourier::eval(cx, u) - p.x, ddy = fourier::eval(cy, u) - p.y;
            const double d = ddx * ddx + ddy * ddy;
            if (d < best_d) { best_d = d; best_u = u; }
        }
        const double k_here = fourier::eval(ck, best_u);
        CHECK_THAT(dec.rho[idx] * k_here, WithinAbs(1.0, 1e-6));
    }
}

TEST_CASE("reconstruction reproduces the trace", "[support]") {
    // translated circle: distance of any reconstructed point to the true
    // circle has a closed form
    const double c = 0.07;
    const auto dec = support_decomposition(translated_circle({c, c}, 1, 1.0, 128));
    const auto rec = reconstruct_from_support(dec);
    for (int j = 0; j < rec.size(); ++j) {
        const Vec2 p = rec.point(j);
        const double off_circle = std::abs(std::hypot(p.x - c, p.y - c) - 1.0);
        CHECK(off_circle <= 1e-8);
    }

    // random convex curve: compare against a dense sampling of the original
    const auto curve = random_convex_curve(3, 1, 128);
    const auto dec2 = support_decomposition(curve);
    const auto rec2 = reconstruct_from_support(dec2);
    const auto cx = fourier::analyze(curve.x());
    const auto cy = fourier::analyze(curve.y());
    const int dense = 8192;
    std::vector<double> dxs(dense), dys(dense);
    for (int s = 0; s < dense; ++s) {
        const double u = fourier::two_pi * s / dense;
        dxs[static_cast<std::size_t>(s)] = fourier::eval(cx, u);
        dys[static_cast<std::size_t>(s)] = fourier::eval(cy, u);
    }
    double worst = 0.0;
    for (int j = 0; j < rec2.size(); ++j) {
        const Vec2 p = rec2.point(j);
        double best = 1e300;
        for (int s = 0; s < dense; ++s) {
            const double ddx = dxs[static_cast<std::size_t>(s)] - p.x;
            const double ddy = dys[static_cast<std::size_t>(s)] - p.y;
            best = std::min(best, ddx * ddx + ddy * ddy);
        }
        worst = std::max(worst, std::sqrt(best));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("theta gauge rejects non-convex curves", "[support]") {
    CHECK_THROWS_AS(support_decomposition(figure_eight(256)), geometry_error);

    std::vector<double> xs(128), ys(128);
    for (int j = 0; j < 128; ++j) {
        const double u = fourier::two_pi * j / 128;
        const double r = 1.0 + 0.35 * std::cos(5.0 * u);
        xs[static_cast<std::size_t>(j)] = r * std::cos(u);
        ys[static_cast<std::size_t>(j)] = r * std::sin(u);
    }
    const ClosedCurve wavy(std::move(xs), std::move(ys));
    CHECK(compute_geometry(wavy).min_k() <= 0.0);
    CHECK_THROWS_AS(support_decomposition(wavy), geometry_error);
}

TEST_CASE("clockwise input is orientation-normalised", "[support]") {
    const auto dec = support_decomposition(omega_circle(1, 1.0, 128).reversed());
    CHECK(dec.omega == 1);
    for (double h : dec.h) CHECK_THAT(h, WithinAbs(1.0, 1e-10));
}

TEST_CASE("distance to the omega-circle", "[support]") {
    SECTION("exact circle") {
        const auto d = distance_to_omega_circle(omega_circle(1, 1.0, 128), 1);
        CHECK(d.raw <= 1e-10);
        CHECK(d.support_proxy <= 1e-10);
    }
    SECTION("translated circle: c sqrt(2 pi)") {
        const double c = 0.1;
        const auto d = distance_to_omega_circle(translated_circle({c, 0.0}, 1, 1.0, 128), 1);
        CHECK_THAT(d.raw, WithinAbs(c * std::sqrt(2.0 * pi), 1e-6));
        CHECK_THAT(d.support_proxy, WithinAbs(c * std::sqrt(2.0 * pi), 1e-6));
        CHECK(d.frame_residual <= 1e-10);
    }
    SECTION("single mode: Parseval with the (1 + m^2) weight") {
        const double eps = 1e-3;
        const auto d = distance_to_omega_circle(perturbed_omega_circle(1, 2, eps, 0.0, 128), 1);
        CHECK_THAT(d.raw, WithinRel(eps * std::sqrt(5.0 * pi), 0.02));
        CHECK(d.frame_residual <= 1e-10);
    }
    SECTION("turning-number mismatch is rejected") {
        CHECK_THROWS_AS(distance_to_omega_circle(omega_circle(2, 1.0, 128), 1), std::invalid_argument);
    }
}
