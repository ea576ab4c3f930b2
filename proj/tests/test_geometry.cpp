#include <doctest.h>

#include "lanekit/geometry.hpp"
#include "lanekit/rng.hpp"
#include "oracles.hpp"

using namespace lanekit;

TEST_CASE("segment clipping against a box") {
    const Box2 box{0.0, 0.0, 1.0, 1.0};
    auto r = clip_segment_to_box({-1.0, 0.5}, {2.0, 0.5}, box);
    REQUIRE(r.has_value());
    CHECK(r->first.x == doctest::Approx(0.0));
    CHECK(r->second.x == doctest::Approx(1.0));

    CHECK_FALSE(clip_segment_to_box({-1.0, 2.0}, {2.0, 2.0}, box).has_value());

    // fully inside stays untouched
    r = clip_segment_to_box({0.2, 0.2}, {0.8, 0.9}, box);
    REQUIRE(r.has_value());
    CHECK(r->first.x == doctest::Approx(0.2));
    CHECK(r->second.y == doctest::Approx(0.9));
}

TEST_CASE("line clipping to a box") {
    const Box2 box{0.0, 0.0, 2.0, 2.0};
    auto r = clip_line_to_box({1.0, 1.0}, {0.0, 1.0}, box);
    REQUIRE(r.has_value());
    CHECK(std::min(r->first.y, r->second.y) == doctest::Approx(0.0));
    CHECK(std::max(r->first.y, r->second.y) == doctest::Approx(2.0));

    CHECK_FALSE(clip_line_to_box({5.0, 0.0}, {0.0, 1.0}, box).has_value());
}

TEST_CASE("convex hull of a square plus interior points") {
    std::vector<Vec2> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.25, 0.75}};
    const auto hull = convex_hull(pts);
    CHECK(hull.size() == 4);
    for (const Vec2& corner : {Vec2{0, 0}, Vec2{1, 0}, Vec2{1, 1}, Vec2{0, 1}})
        CHECK(point_in_convex_polygon(corner, hull));
    CHECK(point_in_convex_polygon({0.5, 0.5}, hull));
    CHECK_FALSE(point_in_convex_polygon({1.5, 0.5}, hull));
}

TEST_CASE("hull degenerate cases") {
    CHECK(convex_hull({}).empty());
    const auto single = convex_hull({{2.0, 3.0}, {2.0, 3.0}});
    CHECK(single.size() == 1);
    CHECK(point_in_convex_polygon({2.0, 3.0}, single));
    const auto collinear = convex_hull({{0, 0}, {1, 1}, {2, 2}});
    CHECK(collinear.size() == 2);
    CHECK(point_in_convex_polygon({1.5, 1.5}, collinear));
    CHECK_FALSE(point_in_convex_polygon({1.0, 0.0}, collinear));
}

TEST_CASE("polygon dilation grows the hull monotonically") {
    const std::vector<Vec2> hull = convex_hull({{0, 0}, {4, 0}, {4, 4}, {0, 4}});
    const auto grown = dilate_convex_polygon(hull, 1.0);
    // every original vertex plus a margin point is inside
    for (const Vec2& v : hull) {
        CHECK(point_in_convex_polygon(v, grown));
        CHECK(point_in_convex_polygon({v.x - 0.9, v.y}, grown));
    }
    CHECK_FALSE(point_in_convex_polygon({-1.2, -1.2}, grown));
}

TEST_CASE("least-squares line fit through exact lines") {
    SegmentMomentAccumulator acc;
    acc.add({0.8, 0.0}, {0.8, 1.0});
    acc.add({0.8, 1.0}, {0.8, 2.5});
    const auto line = acc.fit();
    CHECK(oracles::line_angle_diff(line.theta, M_PI / 2.0) < 1e-9);
    CHECK(line.point.x == doctest::Approx(0.8));

    SegmentMomentAccumulator diag;
    diag.add({0.0, 0.0}, {2.0, 2.0});
    CHECK(diag.fit().theta == doctest::Approx(M_PI / 4.0));
}

TEST_CASE("line fit minimizes orthogonal scatter for noisy-ish input") {
    // two parallel horizontal strokes; the principal direction must stay
    // horizontal, and the centroid in between
    SegmentMomentAccumulator acc;
    acc.add({0.0, 1.0}, {10.0, 1.0});
    acc.add({0.0, -1.0}, {10.0, -1.0});
    const auto line = acc.fit();
    CHECK(std::abs(line.theta) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(line.point.y == doctest::Approx(0.0));
}

TEST_CASE("canonical line angle range") {
    CHECK(canonical_line_angle(M_PI / 2.0) == doctest::Approx(M_PI / 2.0));
    CHECK(canonical_line_angle(-M_PI / 2.0) == doctest::Approx(M_PI / 2.0));
    CHECK(canonical_line_angle(M_PI + 0.3) == doctest::Approx(0.3));
    CHECK(canonical_line_angle(-0.3) == doctest::Approx(-0.3));
}

TEST_CASE("point-segment distance") {
    const Segment s{{0, 0}, {2, 0}};
    CHECK(point_segment_distance({1, 1}, s) == doctest::Approx(1.0));
    CHECK(point_segment_distance({-1, 0}, s) == doctest::Approx(1.0));
    CHECK(point_segment_distance({3, 4}, s) == doctest::Approx(std::sqrt(17.0)));
}
