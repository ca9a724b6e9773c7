#pragma once

#include <algorithm>
#include <cmath>

namespace slcs2 {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
    double dist(const Vec2& o) const { return (*this - o).norm(); }

    Vec2 unit() const {
        double n = norm();
        if (n < 1e-12) return {0.0, 0.0};
        return {x / n, y / n};
    }

    // counter-clockwise perpendicular
    Vec2 perp() const { return {-y, x}; }
};

inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

// proper + touching segment intersection test
inline bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
        double v = cross(b - a, c - a);
        if (v > 1e-12) return 1;
        if (v < -1e-12) return -1;
        return 0;
    };
    auto onSeg = [](const Vec2& a, const Vec2& b, const Vec2& c) {
        return std::min(a.x, b.x) - 1e-12 <= c.x && c.x <= std::max(a.x, b.x) + 1e-12 &&
               std::min(a.y, b.y) - 1e-12 <= c.y && c.y <= std::max(a.y, b.y) + 1e-12;
    };
    int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && onSeg(p1, p2, q1)) return true;
    if (o2 == 0 && onSeg(p1, p2, q2)) return true;
    if (o3 == 0 && onSeg(q1, q2, p1)) return true;
    if (o4 == 0 && onSeg(q1, q2, p2)) return true;
    return false;
}

inline Vec2 closest_point_on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    Vec2 ab = b - a;
    double len2 = ab.dot(ab);
    if (len2 < 1e-18) return a;
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return a + ab * t;
}

inline double point_segment_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
    return p.dist(closest_point_on_segment(a, b, p));
}

// minimum distance between two segments
inline double segment_segment_distance(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    if (segments_intersect(p1, p2, q1, q2)) return 0.0;
    double d = point_segment_distance(q1, q2, p1);
    d = std::min(d, point_segment_distance(q1, q2, p2));
    d = std::min(d, point_segment_distance(p1, p2, q1));
    d = std::min(d, point_segment_distance(p1, p2, q2));
    return d;
}

} // namespace slcs2
