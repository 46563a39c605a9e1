#pragma once

#include <cmath>
#include <stdexcept>

namespace manet {

struct Vec2 {
    double x = 0;
    double y = 0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

inline Vec2 lerp(const Vec2& a, const Vec2& b, double s) {
    return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
}

/// Rectangular simulation area [0,width] x [0,height], meters.
struct AreaBounds {
    double width = 1000.0;
    double height = 1000.0;

    void validate() const {
        if (!(width > 0) || !(height > 0))
            throw std::invalid_argument("area dimensions must be strictly positive");
    }

    bool contains(const Vec2& p, double eps = 1e-9) const {
        return p.x >= -eps && p.x <= width + eps && p.y >= -eps && p.y <= height + eps;
    }

    Vec2 clamp(const Vec2& p) const {
        return {std::fmin(std::fmax(p.x, 0.0), width), std::fmin(std::fmax(p.y, 0.0), height)};
    }
};

}  // namespace manet
