#include "elastica/flow.hpp"
#include "elastica/scenarios.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace elastica;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

double sup_distance(const ClosedCurve& a, const ClosedCurve& b) {
    double worst = 0.0;
    for (int j = 0; j < a.size(); ++j) worst = std::max(worst, (a.point(j) - b.point(j)).norm());
    return worst;
}

FlowConfig rescaled_config(double dt, double t_end, double cadence) {
    FlowConfig cfg;
    cfg.mode = FlowMode::rescaled;
    cfg.scheme = Scheme::semi_implicit_spectral;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.output_every = cadence;
    return cfg;
}

} // namespace

TEST_CASE("normal speed on circles", "[flow]") {
    SECTION("unit omega-circles are rescaled fixed points") {
        for (int omega : {1, 2, 3}) {
            const auto g = compute_geometry(omega_circle(omega, 1.0, 128));
            const auto v = normal_speed(g, FlowMode::rescaled, lambda_coefficient(g));
            for (double s : v) CHECK_THAT(s, WithinAbs(0.0, 1e-12));
        }
    }
    SECTION("free flow pushes a circle outward at 1/rho^3") {
        const double rho = 0.8;
        const auto g = compute_geometry(omega_circle(1, rho, 128));
        const auto v = normal_speed(g, FlowMode::free_flow);
        for (int j = 0; j < g.n; ++j) {
            CHECK_THAT(std::abs(v[static_cast<std::size_t>(j)]), WithinRel(1.0 / (rho * rho * rho), 1e-11));
            // outward: velocity component along the position direction is positive
            const double radial = v[static_cast<std::size_t>(j)] *
                                  g.pos_dot_normal[static_cast<std::size_t>(j)] / rho;
            CHECK(radial > 0.0);
        }
    }
    SECTION("translated circle: pure first-harmonic recentring field") {
        const double c = 0.1;
        const auto curve = translated_circle({c, 0.0}, 1, 1.0, 128);
        const auto g = compute_geometry(curve);
        const auto v = normal_speed(g, FlowMode::rescaled, lambda_coefficient(g));
        for (int j = 0; j < g.n; ++j) {
            const std::size_t i = static_cast<std::size_t>(j);
            const double expected = -(c * g.normal[i].x); // -(offset . nu)
            CHECK_THAT(v[i], WithinAbs(expected, 1e-10));
        }
    }
}

TEST_CASE("lambda coefficient", "[flow]") {
    SECTION("omega-circles: lambda = -1/rho^4") {
        CHECK_THAT(lambda_coefficient(compute_geometry(omega_circle(1, 1.0, 128))), WithinAbs(-1.0, 1e-12));
        CHECK_THAT(lambda_coefficient(compute_geometry(omega_circle(3, 1.0, 128))), WithinAbs(-1.0, 1e-12));
        CHECK_THAT(lambda_coefficient(compute_geometry(omega_circle(1, 0.5, 128))), WithinRel(-16.0, 1e-11));
    }
    SECTION("ellipse value is resolution-converged") {
        const double l256 = lambda_coefficient(compute_geometry(ellipse(2.0, 1.0, 256)));
        const double l512 = lambda_coefficient(compute_geometry(ellipse(2.0, 1.0, 512)));
        CHECK_THAT(l256, WithinAbs(l512, 1e-8));
    }
    SECTION("perturbed circle: lambda + 1 scales as eps^2") {
        const double d1 = lambda_coefficient(compute_geometry(perturbed_omega_circle(1, 2, 1e-3, 0, 128))) + 1.0;
        const double d2 = lambda_coefficient(compute_geometry(perturbed_omega_circle(1, 2, 5e-4, 0, 128))) + 1.0;
        CHECK_THAT(d1 / d2, WithinRel(4.0, 0.10));
    }
}

TEST_CASE("unit omega-circle is stationary under the rescaled step", "[flow]") {
    for (int omega : {1, 2, 3}) {
        const auto circle = omega_circle(omega, 1.0, 128);
        FlowConfig cfg = rescaled_config(1e-3, 1.0, 1.0);
        FlowState state = make_flow_state(circle);
        for (int i = 0; i < 100; ++i) state = step(state, cfg);
        CHECK(sup_distance(state.curve, circle) <= 1e-10); // 100 steps, 1e-12 per step
        CHECK(state.geometry.kosc <= 1e-12);
        CHECK_THAT(state.geometry.length, WithinRel(2.0 * pi * omega, 1e-12));
    }
}

TEST_CASE("free-flow circle follows the radius ODE", "[flow]") {
    // oracle: rho' = rho^{-3} integrated to high accuracy
    FlowConfig cfg;
    cfg.mode = FlowMode::free_flow;
    cfg.scheme = Scheme::semi_implicit_spectral;
    cfg.dt = 1e-5;
    cfg.t_end = 0.2;
    cfg.output_every = 0.02;
    const auto series = run(omega_circle(1, 1.0, 64), cfg);
    REQUIRE(series.rows.size() >= 10);
    for (const auto& row : series.rows) {
        const double rho_sim = row.length / (2.0 * pi);
        const double rho_ode = oracles::ode_rk4_final(
            [](double, double r) { return 1.0 / (r * r * r); }, 1.0, 0.0, row.t, 2000);
        CHECK_THAT(rho_sim, WithinAbs(rho_ode, 1e-5));
        CHECK(row.kosc <= 1e-12);
    }
    // the radius law matches the closed form (rho0^4 + 4t)^{1/4}
    const double t_last = series.rows.back().t;
    CHECK_THAT(series.rows.back().length / (2.0 * pi),
               WithinAbs(std::pow(1.0 + 4.0 * t_last, 0.25), 2e-5));
}

TEST_CASE("free flow dissipates energy; length follows its identity", "[flow]") {
    FlowConfig cfg;
    cfg.mode = FlowMode::free_flow;
    cfg.scheme = Scheme::semi_implicit_spectral;
    cfg.dt = 1e-5;
    cfg.t_end = 0.05;
    cfg.output_every = 5e-3;

    // ellipse (2,1): energy decreases; dL/dt = -2 int k_s^2 + int k^4 is
    // negative this far from a circle, and the run must agree with the sign
    const auto g0 = compute_geometry(ellipse(2.0, 1.0, 128));
    std::vector<double> ks2(static_cast<std::size_t>(g0.n)), k4(static_cast<std::size_t>(g0.n));
    for (int j = 0; j < g0.n; ++j) {
        const std::size_t i = static_cast<std::size_t>(j);
        ks2[i] = g0.ks[i] * g0.ks[i];
        k4[i] = g0.k[i] * g0.k[i] * g0.k[i] * g0.k[i];
    }
    const double dL_dt = -2.0 * g0.integrate_ds(ks2) + g0.integrate_ds(k4);
    CHECK(dL_dt < 0.0);
    const auto series = run(ellipse(2.0, 1.0, 128), cfg);
    for (std::size_t i = 1; i < series.rows.size(); ++i)
        CHECK(series.rows[i].energy < series.rows[i - 1].energy);
    // the initial trend matches the sign (the flow smooths k_s quickly, so
    // L may turn around later in the run)
    CHECK(series.rows[1].length < series.rows.front().length);

    // near-circle initial data: length grows until the omega-circle is hit
    const auto near = run(perturbed_omega_circle(2, 3, 1e-2, 0.0, 64), cfg);
    for (std::size_t i = 1; i < near.rows.size(); ++i) {
        CHECK(near.rows[i].energy < near.rows[i - 1].energy);
        CHECK(near.rows[i].length > near.rows[i - 1].length);
        CHECK(near.rows[i].kosc < near.rows[i - 1].kosc);
    }
}

TEST_CASE("rescaled flow preserves length", "[flow]") {
    FlowConfig cfg = rescaled_config(1e-4, 0.5, 0.05);
    const auto series = run(perturbed_omega_circle(1, 2, 1e-2, 0.0, 128), cfg);
    const double L0 = series.rows.front().length;
    for (const auto& row : series.rows) CHECK(std::abs(row.length - L0) / L0 <= 1e-6);
}

TEST_CASE("arclength resampling", "[flow]") {
    SECTION("uniform circle is a fixed point") {
        const auto circle = omega_circle(1, 1.0, 64);
        CHECK(sup_distance(resample_uniform_arclength(circle), circle) <= 1e-12);
    }
    SECTION("ellipse: trace and scalars preserved, metric flattened") {
        const auto e = ellipse(2.0, 1.0, 256);
        const auto g_before = compute_geometry(e);
        const auto r = resample_uniform_arclength(e);
        const auto g_after = compute_geometry(r);
        CHECK_THAT(g_after.length, WithinAbs(g_before.length, 1e-9));
        CHECK_THAT(g_after.kosc, WithinRel(g_before.kosc, 1e-8));
        CHECK_THAT(g_after.elastic_energy, WithinRel(g_before.elastic_energy, 1e-8));
        CHECK(g_after.min_metric_ratio() <= 1.0 + 1e-6);
        CHECK(g_before.min_metric_ratio() > 1.9); // it actually did something
    }
    SECTION("sheared parametrization of the circle") {
        const int n = 128;
        std::vector<double> xs(n), ys(n);
        for (int j = 0; j < n; ++j) {
            const double u = fourier::two_pi * j / n;
            const double shifted = u + 0.3 * std::sin(u);
            xs[static_cast<std::size_t>(j)] = std::cos(shifted);
            ys[static_cast<std::size_t>(j)] = std::sin(shifted);
        }
        const ClosedCurve sheared(std::move(xs), std::move(ys));
        const auto g_before = compute_geometry(sheared);
        const auto g_after = compute_geometry(resample_uniform_arclength(sheared));
        CHECK_THAT(g_after.kosc, WithinAbs(g_before.kosc, 1e-9));
        CHECK_THAT(g_after.length, WithinAbs(g_before.length, 1e-9));
        CHECK(g_after.min_metric_ratio() <= 1.0 + 1e-6);
    }
}

TEST_CASE("schemes agree on the m=2 scenario", "[flow]") {
    const auto initial = perturbed_omega_circle(1, 2, 1e-3, 0.0, 64);

    FlowConfig semi = rescaled_config(1e-5, 0.01, 0.01);
    FlowConfig rk4 = semi;
    rk4.scheme = Scheme::explicit_rk4;
    rk4.dt.reset(); // stability-limited auto step

    FlowState s_semi = make_flow_state(initial);
    FlowState s_rk4 = s_semi;
    ClosedCurve start = s_semi.curve;

    while (s_semi.t < 0.01 - 1e-12) {
        FlowConfig c = semi;
        c.dt = std::min(*semi.dt, 0.01 - s_semi.t);
        s_semi = step(s_semi, c);
    }
    while (s_rk4.t < 0.01 - 1e-12) {
        FlowConfig c = rk4;
        c.dt = std::min(auto_time_step(Scheme::explicit_rk4, 64, s_rk4.geometry.length), 0.01 - s_rk4.t);
        s_rk4 = step(s_rk4, c);
    }

    CHECK(sup_distance(s_semi.curve, s_rk4.curve) <= 1e-6);
    // and both actually moved
    CHECK(sup_distance(s_semi.curve, start) > 1e-7);
}

namespace {

// terminal state after integrating the two-mode probe curve for a fixed
// horizon with a fixed number of equal steps
ClosedCurve advance_fixed(const ClosedCurve& c0, Scheme scheme, double horizon, int steps) {
    FlowConfig cfg;
    cfg.mode = FlowMode::rescaled;
    cfg.scheme = scheme;
    cfg.dt = horizon / steps;
    cfg.t_end = horizon;
    FlowState s = make_flow_state(c0);
    for (int i = 0; i < steps; ++i) s = step(s, cfg);
    return s.curve;
}

} // namespace

TEST_CASE("temporal convergence orders", "[flow]") {
    // Two support modes (2 and 7) at N = 32 over a short horizon keep the
    // RK4 truncation error of the fast mode above round-off, where a
    // Richardson triple can see the design order. The stability-limited
    // step at N = 32, L = 2 pi is ~1.07e-5.
    const SupportHarmonic hs[2] = {{2, 1e-3, 0.0}, {7, 1e-5, 0.0}};
    const auto probe = curve_from_support_harmonics(1, hs, 32);
    const double horizon = 2e-4;

    SECTION("explicit RK4 is 4th order") {
        const auto ref = advance_fixed(probe, Scheme::explicit_rk4, horizon, 160);
        const double e1 = sup_distance(advance_fixed(probe, Scheme::explicit_rk4, horizon, 20), ref);
        const double e2 = sup_distance(advance_fixed(probe, Scheme::explicit_rk4, horizon, 40), ref);
        const double order = std::log2(e1 / e2);
        INFO("rk4 errors " << e1 << " " << e2 << " order " << order);
        CHECK(e1 > 1e-15); // measurably above round-off
        CHECK_THAT(order, WithinAbs(4.0, 0.6));
    }
    SECTION("semi-implicit splitting is 1st order") {
        const auto ref = advance_fixed(probe, Scheme::semi_implicit_spectral, horizon, 320);
        const double e1 = sup_distance(advance_fixed(probe, Scheme::semi_implicit_spectral, horizon, 10), ref);
        const double e2 = sup_distance(advance_fixed(probe, Scheme::semi_implicit_spectral, horizon, 20), ref);
        const double order = std::log2(e1 / e2);
        INFO("semi errors " << e1 << " " << e2 << " order " << order);
        CHECK(order >= 0.8);
        CHECK(order <= 2.2);
    }
}

TEST_CASE("flow runs are deterministic", "[flow]") {
    FlowConfig cfg = rescaled_config(1e-4, 0.05, 0.01);
    const auto a = run(perturbed_omega_circle(1, 2, 1e-3, 0.0, 64), cfg);
    const auto b = run(perturbed_omega_circle(1, 2, 1e-3, 0.0, 64), cfg);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].e_dev == b.rows[i].e_dev);
        CHECK(a.rows[i].length == b.rows[i].length);
        CHECK(a.rows[i].lambda == b.rows[i].lambda);
    }
}

TEST_CASE("config validation", "[flow]") {
    FlowConfig cfg;
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = FlowConfig{};
    cfg.t_end = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = FlowConfig{};
    cfg.resample_ratio_threshold = 0.9;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
