#include "lanekit/geometry.hpp"

#include <algorithm>
#include <limits>

namespace lanekit {

std::optional<std::pair<Vec2, Vec2>> clip_segment_to_box(const Vec2& a, const Vec2& b,
                                                         const Box2& box) {
    const Vec2 d = b - a;
    double t0 = 0.0, t1 = 1.0;
    const double p[4] = {-d.x, d.x, -d.y, d.y};
    const double q[4] = {a.x - box.x0, box.x1 - a.x, a.y - box.y0, box.y1 - a.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return std::nullopt;
            continue;
        }
        const double r = q[i] / p[i];
        if (p[i] < 0.0) {
            if (r > t1) return std::nullopt;
            t0 = std::max(t0, r);
        } else {
            if (r < t0) return std::nullopt;
            t1 = std::min(t1, r);
        }
    }
    if (t0 > t1) return std::nullopt;
    return std::make_pair(a + d * t0, a + d * t1);
}

std::optional<std::pair<Vec2, Vec2>> clip_line_to_box(const Vec2& point, const Vec2& dir,
                                                      const Box2& box) {
    double t0 = -std::numeric_limits<double>::infinity();
    double t1 = std::numeric_limits<double>::infinity();
    const double p[4] = {-dir.x, dir.x, -dir.y, dir.y};
    const double q[4] = {point.x - box.x0, box.x1 - point.x, point.y - box.y0, box.y1 - point.y};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return std::nullopt;
            continue;
        }
        const double r = q[i] / p[i];
        if (p[i] < 0.0)
            t0 = std::max(t0, r);
        else
            t1 = std::min(t1, r);
    }
    if (t0 > t1) return std::nullopt;
    return std::make_pair(point + dir * t0, point + dir * t1);
}

Vec2 project_onto_line(const Vec2& p, const Segment& line) {
    const Vec2 u = line.direction();
    const double t = (p - line.p1).dot(u);
    return line.p1 + u * t;
}

double point_segment_distance(const Vec2& p, const Segment& s) {
    const Vec2 d = s.p2 - s.p1;
    const double len2 = d.squared_norm();
    if (len2 == 0.0) return distance(p, s.p1);
    double t = (p - s.p1).dot(d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, s.p1 + d * t);
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const size_t n = pts.size();
    if (n <= 2) return pts;

    std::vector<Vec2> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {  // lower
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    for (size_t i = n - 1, t = k + 1; i-- > 0;) {  // upper
        while (k >= t && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool point_in_convex_polygon(const Vec2& p, const std::vector<Vec2>& poly, double eps) {
    if (poly.empty()) return false;
    if (poly.size() == 1) return distance(p, poly[0]) <= eps;
    if (poly.size() == 2) return point_segment_distance(p, {poly[0], poly[1]}) <= eps;
    for (size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        if ((b - a).cross(p - a) < -eps) return false;
    }
    return true;
}

std::vector<Vec2> dilate_convex_polygon(const std::vector<Vec2>& poly, double radius,
                                        int ngon_sides) {
    if (radius <= 0.0 || poly.empty()) return poly;
    std::vector<Vec2> sum;
    sum.reserve(poly.size() * static_cast<size_t>(ngon_sides));
    for (const Vec2& v : poly) {
        for (int k = 0; k < ngon_sides; ++k) {
            const double ang = 2.0 * M_PI * k / ngon_sides;
            sum.push_back({v.x + radius * std::cos(ang), v.y + radius * std::sin(ang)});
        }
    }
    return convex_hull(std::move(sum));
}

void SegmentMomentAccumulator::add(const Vec2& a, const Vec2& b) {
    const double l = distance(a, b);
    if (l <= 0.0) return;
    if (len == 0.0) first = a;
    last = b;
    len += l;
    sx += l * 0.5 * (a.x + b.x);
    sy += l * 0.5 * (a.y + b.y);
    // exact line integrals of x^2, xy, y^2 over the segment
    sxx += l * (a.x * a.x + a.x * b.x + b.x * b.x) / 3.0;
    syy += l * (a.y * a.y + a.y * b.y + b.y * b.y) / 3.0;
    sxy += l * (2.0 * a.x * a.y + a.x * b.y + b.x * a.y + 2.0 * b.x * b.y) / 6.0;
}

SegmentMomentAccumulator::Line SegmentMomentAccumulator::fit() const {
    if (len <= 0.0) throw std::invalid_argument("SegmentMomentAccumulator::fit: empty");
    const double cx = sx / len, cy = sy / len;
    const double cxx = sxx / len - cx * cx;
    const double cyy = syy / len - cy * cy;
    const double cxy = sxy / len - cx * cy;
    double theta;
    if (std::abs(cxy) < 1e-18 && std::abs(cxx - cyy) < 1e-18) {
        // isotropic scatter, fall back to the chord of the accumulated chain
        const Vec2 chord = last - first;
        theta = chord.norm() > 0.0 ? std::atan2(chord.y, chord.x) : 0.0;
    } else {
        theta = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
    }
    theta = canonical_line_angle(theta);
    return {{cx, cy}, {std::cos(theta), std::sin(theta)}, theta};
}

double canonical_line_angle(double theta) {
    theta = std::remainder(theta, M_PI);  // lands in [-pi/2, pi/2]
    if (theta <= -M_PI / 2.0) theta += M_PI;
    return theta;
}

}  // namespace lanekit
