#pragma once
// Scenario constructors: omega-circles, support-function perturbations of
// omega-circles, ellipses, translated circles, seeded random convex curves,
// and a figure-eight. Also the string form used by the CLI, e.g.
//   "omega_circle:3"  "perturbed:omega=1,m=2,eps=1e-3"  "ellipse:2,1"
//   "translated_circle:0.1,0"  "mixed:omega=9,m=10,eps=1e-3,cx=0.02"
//   "random:seed=7"  "two_mode:omega=1,m=2,eps=1e-2"  "figure_eight"
//
// Support-function construction: on the normal-angle circle of length
// 2*pi*omega, h(theta) = 1 + sum_i amp_i cos(m_i*theta/omega + phase_i).
// The curve is recovered from the Minkowski position formula
// gamma = h*e(theta) + h_theta*e_perp(theta); the radius of curvature is
// rho = h + h_{theta theta}, which must stay positive. A harmonic with
// m = omega is a pure translation and leaves rho (hence curvature) alone;
// m = 0 would change the length and is rejected.

#include "elastica/curve.hpp"
#include "elastica/fourier.hpp"
#include "elastica/rng.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace elastica {

struct SupportHarmonic {
    int m = 0;
    double amplitude = 0.0;
    double phase = 0.0;
};

inline ClosedCurve curve_from_support_harmonics(int omega, std::span<const SupportHarmonic> harmonics,
                                                int n_samples) {
    if (omega < 1) throw std::invalid_argument("support construction requires omega >= 1");
    ClosedCurve::validate_count(n_samples);

    int max_m = 0;
    for (const auto& hm : harmonics) {
        if (hm.m == 0)
            throw std::invalid_argument("support harmonic m = 0 would change the length; rejected");
        if (hm.m < 0) throw std::invalid_argument("support harmonic m must be positive");
        max_m = std::max(max_m, hm.m);
    }
    if (n_samples / 2 <= max_m + omega)
        throw std::invalid_argument("n_samples too small to resolve support mode " + std::to_string(max_m));

    // positivity of rho = 1 + sum a_i (1 - (m_i/omega)^2) cos(...), checked densely
    const int probe = 8192;
    for (int i = 0; i < probe; ++i) {
        const double u = fourier::two_pi * i / probe;
        double rho = 1.0;
        for (const auto& hm : harmonics) {
            const double ratio = static_cast<double>(hm.m) / omega;
            rho += hm.amplitude * (1.0 - ratio * ratio) * std::cos(hm.m * u + hm.phase);
        }
        if (!(rho > 0.0))
            throw std::invalid_argument("requested support perturbation is not convex (rho <= 0)");
    }

    std::vector<double> xs(static_cast<std::size_t>(n_samples)), ys(static_cast<std::size_t>(n_samples));
    for (int j = 0; j < n_samples; ++j) {
        const double u = fourier::two_pi * j / n_samples;
        double h = 1.0, h_theta = 0.0;
        for (const auto& hm : harmonics) {
            const double arg = hm.m * u + hm.phase;
            h += hm.amplitude * std::cos(arg);
            h_theta -= hm.amplitude * (static_cast<double>(hm.m) / omega) * std::sin(arg);
        }
        const double ct = std::cos(omega * u), st = std::sin(omega * u);
        xs[static_cast<std::size_t>(j)] = h * ct - h_theta * st;
        ys[static_cast<std::size_t>(j)] = h * st + h_theta * ct;
    }
    return ClosedCurve(std::move(xs), std::move(ys));
}

inline ClosedCurve omega_circle(int omega, double radius = 1.0, int n_samples = 128) {
    if (omega < 1) throw std::invalid_argument("omega_circle requires omega >= 1");
    if (!(radius > 0.0)) throw std::invalid_argument("omega_circle requires radius > 0");
    ClosedCurve::validate_count(n_samples);
    std::vector<double> xs(static_cast<std::size_t>(n_samples)), ys(static_cast<std::size_t>(n_samples));
    for (int j = 0; j < n_samples; ++j) {
        const double u = fourier::two_pi * j / n_samples;
        xs[static_cast<std::size_t>(j)] = radius * std::cos(omega * u);
        ys[static_cast<std::size_t>(j)] = radius * std::sin(omega * u);
    }
    return ClosedCurve(std::move(xs), std::move(ys));
}

// Single support mode: h = 1 + eps*cos(m*theta/omega + phase).
inline ClosedCurve perturbed_omega_circle(int omega, int m, double eps, double phase = 0.0,
                                          int n_samples = 128) {
    const SupportHarmonic hm{m, eps, phase};
    return curve_from_support_harmonics(omega, std::span<const SupportHarmonic>(&hm, 1), n_samples);
}

// Two-harmonic family (modes m and 2m, amplitudes eps and eps/16). A single
// cosine mode maps eps -> -eps to a rotation of the same curve, so all of
// its functionals are even in eps; the second harmonic breaks that symmetry
// and exposes genuinely cubic behaviour. The 1/16 weight keeps the
// quartic chain of the stiffer 2m harmonic from contaminating the cubic
// window at the amplitudes the probes use.
inline ClosedCurve two_mode_perturbed_circle(int omega, int m, double eps, int n_samples = 128) {
    const SupportHarmonic hs[2] = {{m, eps, 0.0}, {2 * m, eps / 16.0, 0.0}};
    return curve_from_support_harmonics(omega, hs, n_samples);
}

inline ClosedCurve ellipse(double a, double b, int n_samples = 256) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipse semi-axes must be positive");
    ClosedCurve::validate_count(n_samples);
    std::vector<double> xs(static_cast<std::size_t>(n_samples)), ys(static_cast<std::size_t>(n_samples));
    for (int j = 0; j < n_samples; ++j) {
        const double u = fourier::two_pi * j / n_samples;
        xs[static_cast<std::size_t>(j)] = a * std::cos(u);
        ys[static_cast<std::size_t>(j)] = b * std::sin(u);
    }
    return ClosedCurve(std::move(xs), std::move(ys));
}

inline ClosedCurve translated_circle(Vec2 offset, int omega = 1, double radius = 1.0, int n_samples = 128) {
    ClosedCurve c = omega_circle(omega, radius, n_samples);
    c.translate(offset);
    return c;
}

// Shape mode plus rigid offset, the mixed initial data of the main-theorem
// experiment.
inline ClosedCurve mixed_perturbed_circle(int omega, int m, double eps, Vec2 offset, int n_samples = 128) {
    ClosedCurve c = perturbed_omega_circle(omega, m, eps, 0.0, n_samples);
    c.translate(offset);
    return c;
}

// Gerono-style figure eight; immersed, turning number 0.
inline ClosedCurve figure_eight(int n_samples = 256) {
    ClosedCurve::validate_count(n_samples);
    std::vector<double> xs(static_cast<std::size_t>(n_samples)), ys(static_cast<std::size_t>(n_samples));
    for (int j = 0; j < n_samples; ++j) {
        const double u = fourier::two_pi * j / n_samples;
        xs[static_cast<std::size_t>(j)] = std::sin(u);
        ys[static_cast<std::size_t>(j)] = std::sin(u) * std::cos(u);
    }
    return ClosedCurve(std::move(xs), std::move(ys));
}

// Seeded band-limited convex curve: support modes 2..9 with amplitudes
// ~ m^{-4}, scaled so that rho stays well away from zero.
inline ClosedCurve random_convex_curve(std::uint64_t seed, int omega = 1, int n_samples = 256) {
    SplitMix64 rng(seed);
    std::vector<SupportHarmonic> hs;
    double rho_budget = 0.0;
    for (int m = 2; m <= 9; ++m) {
        SupportHarmonic hm;
        hm.m = m;
        hm.amplitude = rng.uniform(-1.0, 1.0) / (static_cast<double>(m) * m * m * m);
        hm.phase = rng.uniform(0.0, fourier::two_pi);
        const double ratio = static_cast<double>(m) / omega;
        rho_budget += std::abs(hm.amplitude * (1.0 - ratio * ratio));
        hs.push_back(hm);
    }
    const double scale = (rho_budget > 0.0) ? 0.5 / rho_budget : 0.0;
    for (auto& hm : hs) hm.amplitude *= scale;
    return curve_from_support_harmonics(omega, hs, n_samples);
}

// ---------------------------------------------------------------------------
// scenario strings

namespace detail {

struct ScenarioArgs {
    std::vector<std::string> positional;
    std::map<std::string, std::string> named;

    double num(const std::string& key, std::optional<double> fallback = std::nullopt) const {
        auto it = named.find(key);
        if (it == named.end()) {
            if (fallback) return *fallback;
            throw std::invalid_argument("scenario is missing parameter '" + key + "'");
        }
        return std::stod(it->second);
    }
};

inline ScenarioArgs parse_scenario_args(std::string_view text) {
    ScenarioArgs args;
    std::string token;
    std::stringstream ss{std::string(text)};
    while (std::getline(ss, token, ',')) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            args.positional.push_back(token);
        else
            args.named[token.substr(0, eq)] = token.substr(eq + 1);
    }
    return args;
}

} // namespace detail

inline ClosedCurve make_scenario(std::string_view spec, int n_samples = 0, std::uint64_t seed = 0) {
    const auto colon = spec.find(':');
    const std::string name{spec.substr(0, colon)};
    const auto args = detail::parse_scenario_args(colon == std::string_view::npos ? "" : spec.substr(colon + 1));
    auto n_or = [&](int dflt) { return n_samples > 0 ? n_samples : dflt; };

    if (name == "circle") return omega_circle(1, 1.0, n_or(128));
    if (name == "omega_circle") {
        if (args.positional.empty()) throw std::invalid_argument("omega_circle:W[,RADIUS]");
        const int w = std::stoi(args.positional[0]);
        const double r = args.positional.size() > 1 ? std::stod(args.positional[1]) : 1.0;
        return omega_circle(w, r, n_or(128));
    }
    if (name == "perturbed") {
        const int w = static_cast<int>(args.num("omega", 1.0));
        const int m = static_cast<int>(args.num("m"));
        const double eps = args.num("eps");
        const double phase = args.num("phase", 0.0);
        return perturbed_omega_circle(w, m, eps, phase, n_or(128));
    }
    if (name == "two_mode") {
        const int w = static_cast<int>(args.num("omega", 1.0));
        const int m = static_cast<int>(args.num("m"));
        const double eps = args.num("eps");
        return two_mode_perturbed_circle(w, m, eps, n_or(128));
    }
    if (name == "ellipse") {
        if (args.positional.size() < 2) throw std::invalid_argument("ellipse:A,B");
        return ellipse(std::stod(args.positional[0]), std::stod(args.positional[1]), n_or(256));
    }
    if (name == "translated_circle") {
        if (args.positional.size() < 2) throw std::invalid_argument("translated_circle:CX,CY");
        const Vec2 off{std::stod(args.positional[0]), std::stod(args.positional[1])};
        const int w = static_cast<int>(args.num("omega", 1.0));
        return translated_circle(off, w, 1.0, n_or(128));
    }
    if (name == "mixed") {
        const int w = static_cast<int>(args.num("omega"));
        const int m = static_cast<int>(args.num("m"));
        const double eps = args.num("eps");
        const Vec2 off{args.num("cx", 0.0), args.num("cy", 0.0)};
        return mixed_perturbed_circle(w, m, eps, off, n_or(128));
    }
    if (name == "random") {
        const std::uint64_t s = args.named.count("seed") ? std::stoull(args.named.at("seed")) : seed;
        const int w = static_cast<int>(args.num("omega", 1.0));
        return random_convex_curve(s, w, n_or(256));
    }
    if (name == "figure_eight") return figure_eight(n_or(256));

    throw std::invalid_argument("unknown scenario '" + name + "'");
}

} // namespace elastica
