#pragma once
// Exponential decay-rate estimation: least squares on (t, log v) over a
// window, reporting the negated slope and the coefficient of determination.
// Samples at or below the floor are excluded; if fewer than ten remain the
// fit is inconclusive rather than a fabricated number.

#include <cmath>
#include <span>
#include <string>

namespace elastica {

struct DecayFit {
    std::string column;
    double window_begin = 0.0, window_end = 0.0;
    double floor = 1e-12;
    int n_used = 0;
    double rate = 0.0;     // decay rate (positive means decaying)
    double goodness = 0.0; // R^2 of the log-linear fit
    bool conclusive = false;
    std::string note;
};

inline DecayFit fit_decay_rate(std::span<const double> t, std::span<const double> v,
                               double window_begin, double window_end, double floor = 1e-12,
                               std::string column = {}) {
    DecayFit fit;
    fit.column = std::move(column);
    fit.window_begin = window_begin;
    fit.window_end = window_end;
    fit.floor = floor;

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, n = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window_begin || t[i] > window_end) continue;
        if (!(v[i] > floor)) continue;
        const double x = t[i], y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        n += 1.0;
    }
    fit.n_used = static_cast<int>(n);
    if (fit.n_used < 10) {
        fit.note = "insufficient samples above floor in window";
        return fit;
    }

    const double det = n * sxx - sx * sx;
    if (!(std::abs(det) > 0.0)) {
        fit.note = "degenerate abscissae";
        return fit;
    }
    const double slope = (n * sxy - sx * sy) / det;
    const double intercept = (sy - slope * sx) / n;
    fit.rate = -slope;

    // R^2; a (numerically) constant column fits its own mean perfectly
    double ss_tot = 0.0, ss_res = 0.0;
    const double mean_y = sy / n;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < window_begin || t[i] > window_end) continue;
        if (!(v[i] > floor)) continue;
        const double y = std::log(v[i]);
        ss_tot += (y - mean_y) * (y - mean_y);
        const double r = y - (intercept + slope * t[i]);
        ss_res += r * r;
    }
    const double tot_floor = 1e-24 * n * std::max(1.0, mean_y * mean_y);
    fit.goodness = (ss_tot > tot_floor) ? 1.0 - ss_res / ss_tot : 1.0;
    fit.conclusive = true;
    return fit;
}

} // namespace elastica
