#pragma once
// Trigonometric (FFT-based) machinery for smooth periodic samples on a
// uniform grid: differentiation by frequency multipliers, interpolation at
// arbitrary parameters, resampling, dealiased pointwise products, and the
// periodic part of the antiderivative.
//
// Conventions:
//   * n is even; samples live at u_j = period * j/n, j = 0..n-1.
//   * analyze() returns c_k = (1/n) sum_j f_j e^{-2*pi*i*jk/n}, k = 0..n/2.
//   * For real input the Nyquist coefficient c_{n/2} is real; odd-order
//     derivatives zero it, even-order ones keep it (the standard choice).
//   * Accuracy statements assume the trigonometric spectrum of the data has
//     decayed below round-off before mode n/2 ("band-limited").

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace elastica::fourier {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

using Spectrum = std::vector<std::complex<double>>;

namespace detail {

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// One FFTW r2c/c2r plan pair for a fixed even size, with owned buffers.
// Plans use FFTW_ESTIMATE so the transform algorithm (and hence the last
// bits of the output) is reproducible run to run.
class Engine {
public:
    explicit Engine(int n) : n_(n) {
        if (n < 2 || n % 2 != 0) throw std::invalid_argument("fourier: size must be even and >= 2");
        real_ = static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(n)));
        cplx_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (static_cast<std::size_t>(n) / 2 + 1)));
        if (!real_ || !cplx_) throw std::bad_alloc();
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_r2c_1d(n, real_, cplx_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(n, cplx_, real_, FFTW_ESTIMATE);
    }

    ~Engine() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(cplx_);
    }

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    void forward(std::span<const double> in, Spectrum& out) {
        std::memcpy(real_, in.data(), sizeof(double) * static_cast<std::size_t>(n_));
        fftw_execute(fwd_);
        const double scale = 1.0 / n_;
        out.resize(static_cast<std::size_t>(n_) / 2 + 1);
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = std::complex<double>(cplx_[k][0] * scale, cplx_[k][1] * scale);
    }

    void inverse(const Spectrum& in, std::span<double> out) {
        for (std::size_t k = 0; k < in.size(); ++k) {
            cplx_[k][0] = in[k].real();
            cplx_[k][1] = in[k].imag();
        }
        fftw_execute(bwd_);
        std::memcpy(out.data(), real_, sizeof(double) * static_cast<std::size_t>(n_));
    }

private:
    int n_;
    double* real_ = nullptr;
    fftw_complex* cplx_ = nullptr;
    fftw_plan fwd_{}, bwd_{};
};

inline Engine& engine(int n) {
    thread_local std::unordered_map<int, std::unique_ptr<Engine>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Engine>(n);
    return *slot;
}

} // namespace detail

inline int sample_count(const Spectrum& c) { return 2 * (static_cast<int>(c.size()) - 1); }

inline Spectrum analyze(std::span<const double> f) {
    Spectrum c;
    detail::engine(static_cast<int>(f.size())).forward(f, c);
    return c;
}

inline std::vector<double> synthesize(const Spectrum& c) {
    const int n = sample_count(c);
    std::vector<double> f(static_cast<std::size_t>(n));
    detail::engine(n).inverse(c, f);
    return f;
}

// Round-off filter (Krasny): zero coefficients below rel_tol times the
// largest one. High-order spectral derivatives amplify per-sample round-off
// by n^order; clipping the noise floor keeps, e.g., the curvature of an
// exactly sampled circle constant to machine precision instead of 1e-9.
inline void threshold_filter(Spectrum& c, double rel_tol = 1e-13) {
    double peak = 0.0;
    for (const auto& v : c) peak = std::max(peak, std::abs(v));
    const double cut = rel_tol * peak;
    for (auto& v : c)
        if (std::abs(v) < cut) v = 0.0;
}

// Multiply by (i*kappa)^order in place, kappa_k = 2*pi*k/period.
inline void derivative_spectrum(Spectrum& c, int order, double period = two_pi) {
    if (order <= 0) {
        if (order < 0) throw std::invalid_argument("fourier: derivative order must be >= 0");
        return;
    }
    const int half = static_cast<int>(c.size()) - 1;
    const double base = two_pi / period;
    for (int k = 0; k <= half; ++k) {
        std::complex<double> mult(1.0, 0.0);
        const std::complex<double> ik(0.0, base * k);
        for (int p = 0; p < order; ++p) mult *= ik;
        if (k == half && (order % 2 != 0)) mult = 0.0; // Nyquist: no odd derivative
        c[static_cast<std::size_t>(k)] *= mult;
    }
}

inline std::vector<double> derivative(std::span<const double> f, int order, double period = two_pi) {
    Spectrum c = analyze(f);
    derivative_spectrum(c, order, period);
    return synthesize(c);
}

// Evaluate the trigonometric interpolant at parameter u (same units as the
// grid, i.e. u in [0, period)).
inline double eval(const Spectrum& c, double u, double period = two_pi) {
    const int half = static_cast<int>(c.size()) - 1;
    const double base = two_pi / period;
    double acc = c[0].real();
    for (int k = 1; k < half; ++k) {
        const double ph = base * k * u;
        acc += 2.0 * (c[static_cast<std::size_t>(k)].real() * std::cos(ph) -
                      c[static_cast<std::size_t>(k)].imag() * std::sin(ph));
    }
    acc += c[static_cast<std::size_t>(half)].real() * std::cos(base * half * u);
    return acc;
}

// Spectrum of the same function on an m-point grid (zero-pad / truncate).
inline Spectrum resample_spectrum(const Spectrum& c, int m) {
    if (m % 2 != 0 || m < 2) throw std::invalid_argument("fourier: resample target must be even");
    const int src_half = static_cast<int>(c.size()) - 1;
    const int dst_half = m / 2;
    Spectrum out(static_cast<std::size_t>(dst_half) + 1, std::complex<double>(0.0, 0.0));
    const int copy = std::min(src_half, dst_half);
    for (int k = 0; k < copy; ++k) out[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k)];
    if (dst_half > src_half) {
        out[static_cast<std::size_t>(src_half)] = 0.5 * c[static_cast<std::size_t>(src_half)]; // split old Nyquist
    } else if (dst_half == src_half) {
        out[static_cast<std::size_t>(dst_half)] = c[static_cast<std::size_t>(dst_half)];
    } else {
        out[static_cast<std::size_t>(dst_half)] = 2.0 * c[static_cast<std::size_t>(dst_half)].real();
    }
    return out;
}

inline std::vector<double> resample(std::span<const double> f, int m) {
    return synthesize(resample_spectrum(analyze(f), m));
}

// Pointwise product evaluated on the doubled grid and truncated back:
// alias-free for quadratic and cubic combinations of band-limited data.
inline std::vector<double> product(std::span<const double> a, std::span<const double> b) {
    const int n = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("fourier: product size mismatch");
    std::vector<double> ap = resample(a, 2 * n);
    std::vector<double> bp = resample(b, 2 * n);
    for (std::size_t j = 0; j < ap.size(); ++j) ap[j] *= bp[j];
    return resample(ap, n);
}

inline std::vector<double> product3(std::span<const double> a, std::span<const double> b,
                                    std::span<const double> c) {
    const int n = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != n || static_cast<int>(c.size()) != n)
        throw std::invalid_argument("fourier: product size mismatch");
    std::vector<double> ap = resample(a, 2 * n);
    std::vector<double> bp = resample(b, 2 * n);
    std::vector<double> cp = resample(c, 2 * n);
    for (std::size_t j = 0; j < ap.size(); ++j) ap[j] *= bp[j] * cp[j];
    return resample(ap, n);
}

// Strictly increasing map u -> slope*u + p(u) with p periodic (given by its
// spectrum on the 2*pi grid); supports safeguarded-Newton inversion. Used
// for the tangent-angle map (slope = omega) and the arclength map
// (slope = mean metric).
class LinearPlusPeriodicMap {
public:
    LinearPlusPeriodicMap(double slope, Spectrum periodic_part)
        : slope_(slope), p_(std::move(periodic_part)), dp_(p_) {
        derivative_spectrum(dp_, 1);
    }

    double value(double u) const { return slope_ * u + eval(p_, u); }
    double slope_at(double u) const { return slope_ + eval(dp_, u); }

    double invert(double target, double lo, double hi, double tol = 1e-12) const {
        double u = std::min(std::max(lo, lo + (target - value(lo)) / slope_), hi);
        for (int it = 0; it < 100; ++it) {
            const double f = value(u) - target;
            if (std::abs(f) <= tol) return u;
            if (f > 0.0) hi = u; else lo = u;
            const double df = slope_at(u);
            double next = (df > 0.0) ? u - f / df : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            u = next;
        }
        return u;
    }

private:
    double slope_;
    Spectrum p_, dp_;
};

// Periodic part of the antiderivative of (f - mean f), normalised to
// vanish at u = 0. The full antiderivative is mean(f)*u + this.
inline std::vector<double> antiderivative_periodic(std::span<const double> f, double period = two_pi) {
    Spectrum c = analyze(f);
    const int half = static_cast<int>(c.size()) - 1;
    const double base = two_pi / period;
    c[0] = 0.0;
    for (int k = 1; k <= half; ++k)
        c[static_cast<std::size_t>(k)] /= std::complex<double>(0.0, base * k);
    if (half >= 1) c[static_cast<std::size_t>(half)] = 0.0; // Nyquist has no sine partner
    std::vector<double> F = synthesize(c);
    const double f0 = F[0];
    for (double& v : F) v -= f0;
    return F;
}

} // namespace elastica::fourier
