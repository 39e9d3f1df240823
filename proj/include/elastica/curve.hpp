#pragma once
// Closed immersed plane curves sampled on the uniform periodic parameter
// grid u_j = 2*pi*j/n. The sample count is even and at least 16; curves are
// periodic by construction (no duplicated endpoint).

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace elastica {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    // +90 degree rotation; applied to the unit tangent it gives the normal
    // convention used throughout (counterclockwise circle: k = +1, normal
    // pointing inward).
    Vec2 rot90() const { return {-y, x}; }
};

class ClosedCurve {
public:
    ClosedCurve() = default;

    ClosedCurve(std::vector<double> xs, std::vector<double> ys) : x_(std::move(xs)), y_(std::move(ys)) {
        if (x_.size() != y_.size()) throw std::invalid_argument("ClosedCurve: coordinate arrays differ in size");
        validate_count(static_cast<int>(x_.size()));
    }

    static void validate_count(int n) {
        if (n < 16 || n % 2 != 0)
            throw std::invalid_argument("ClosedCurve: n_samples must be even and >= 16, got " + std::to_string(n));
    }

    int size() const { return static_cast<int>(x_.size()); }
    std::span<const double> x() const { return x_; }
    std::span<const double> y() const { return y_; }
    Vec2 point(int j) const { return {x_[static_cast<std::size_t>(j)], y_[static_cast<std::size_t>(j)]}; }

    double parameter(int j) const { return 2.0 * std::numbers::pi * j / size(); }

    void translate(Vec2 d) {
        for (double& v : x_) v += d.x;
        for (double& v : y_) v += d.y;
    }

    void scale(double s) {
        for (double& v : x_) v *= s;
        for (double& v : y_) v *= s;
    }

    // Same trace, opposite orientation; sample 0 is kept in place so the
    // grid stays uniform.
    ClosedCurve reversed() const {
        const int n = size();
        std::vector<double> rx(static_cast<std::size_t>(n)), ry(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            const int src = (n - j) % n;
            rx[static_cast<std::size_t>(j)] = x_[static_cast<std::size_t>(src)];
            ry[static_cast<std::size_t>(j)] = y_[static_cast<std::size_t>(src)];
        }
        return ClosedCurve(std::move(rx), std::move(ry));
    }

private:
    std::vector<double> x_, y_;
};

} // namespace elastica
