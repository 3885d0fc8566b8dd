#pragma once

#include <cmath>

namespace scengen {

/// 2D vector, meters.
struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2& operator+=(const Vec2& r) { x += r.x; y += r.y; return *this; }

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }

    Vec2 normalized() const {
        double n = norm();
        if (n < 1e-12) return {0.0, 0.0};
        return {x / n, y / n};
    }
    constexpr Vec2 perp() const { return {-y, x}; }
};

inline Vec2 from_heading(double heading) { return {std::cos(heading), std::sin(heading)}; }

inline double wrap_angle(double a) {
    a = std::fmod(a + M_PI, 2.0 * M_PI);
    if (a < 0) a += 2.0 * M_PI;
    return a - M_PI;
}

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Distance from p to segment [a,b] and the projection parameter in [0,1].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b, double* t_out = nullptr) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    double t = len2 < 1e-12 ? 0.0 : std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    if (t_out) *t_out = t;
    return (p - (a + ab * t)).norm();
}

}  // namespace scengen
