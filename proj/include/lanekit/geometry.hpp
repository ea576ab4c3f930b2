#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lanekit {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    double squared_norm() const { return x * x + y * y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

/// Rotate counterclockwise by angle (radians).
inline Vec2 rotate(const Vec2& v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Line segment in ground-plane meters. Endpoints must be distinct.
struct Segment {
    Vec2 p1;
    Vec2 p2;

    double length() const { return distance(p1, p2); }
    Vec2 direction() const {
        Vec2 d = p2 - p1;
        double n = d.norm();
        return {d.x / n, d.y / n};
    }
};

constexpr double kMinSegmentLength = 1e-6;

struct ScoredSegment {
    Segment seg;
    double conf = 1.0;
};

/// Axis-aligned box, min/max corners.
struct Box2 {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool contains(const Vec2& p) const {
        return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1;
    }
    Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
};

struct LanePolyline {
    std::vector<Vec2> points;
};

/// Clip segment [a,b] to a closed box (Liang-Barsky). Returns the clipped
/// endpoints, or nullopt when the segment misses the box.
std::optional<std::pair<Vec2, Vec2>> clip_segment_to_box(const Vec2& a, const Vec2& b,
                                                         const Box2& box);

/// Clip the infinite line through `point` with unit `dir` to a closed box.
std::optional<std::pair<Vec2, Vec2>> clip_line_to_box(const Vec2& point, const Vec2& dir,
                                                      const Box2& box);

/// Orthogonal projection of p onto the infinite line through the segment.
Vec2 project_onto_line(const Vec2& p, const Segment& line);

/// Distance from point to a (finite) segment.
double point_segment_distance(const Vec2& p, const Segment& s);

/// Convex hull (monotone chain), counterclockwise, no duplicate last point.
/// 0/1/2-point inputs come back as-is (deduplicated).
std::vector<Vec2> convex_hull(std::vector<Vec2> points);

/// True when p lies inside or on a convex counterclockwise polygon.
/// Handles degenerate polygons of 1 or 2 vertices.
bool point_in_convex_polygon(const Vec2& p, const std::vector<Vec2>& poly, double eps = 1e-9);

/// Minkowski sum of a convex polygon with a centered regular n-gon disc
/// approximation of the given radius.
std::vector<Vec2> dilate_convex_polygon(const std::vector<Vec2>& poly, double radius,
                                        int ngon_sides = 16);

/// Accumulates per-unit-length first and second moments of line segments,
/// for total-least-squares line fitting.
struct SegmentMomentAccumulator {
    double len = 0.0;
    double sx = 0.0, sy = 0.0;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    Vec2 first, last;  // extremes of the accumulated chain, in insertion order

    void add(const Vec2& a, const Vec2& b);

    /// Fitted line: point on line (centroid) + unit direction + canonical
    /// orientation theta in (-pi/2, pi/2]. Requires len > 0.
    struct Line {
        Vec2 point;
        Vec2 dir;
        double theta;
    };
    Line fit() const;
};

/// Canonicalize an undirected line angle into (-pi/2, pi/2].
double canonical_line_angle(double theta);

}  // namespace lanekit
