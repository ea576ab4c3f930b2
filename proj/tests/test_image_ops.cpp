#include <doctest.h>

#include <cmath>

#include "lanekit/image_ops.hpp"
#include "lanekit/rng.hpp"

using namespace lanekit;

TEST_CASE("gradient of a constant image is zero") {
    Image img(8, 6, 0.42f);
    const Image g = grad(img);
    for (float v : g.px) CHECK(v == 0.0f);
}

TEST_CASE("gradient of a horizontal ramp is the slope in the interior") {
    const float slope = 0.01f;
    Image img(10, 5);
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c) img.at(r, c) = slope * c;
    const Image g = grad(img);
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
            CHECK(g.at(r, c) == doctest::Approx(slope).epsilon(1e-5));
}

TEST_CASE("vertical stripe produces two flanking gradient ridges") {
    Image img(16, 8, 0.0f);
    for (int r = 0; r < img.height; ++r)
        for (int c = 6; c <= 8; ++c) img.at(r, c) = 1.0f;
    const Image g = grad(img);

    // finite-difference oracle computed directly on the explicit raster
    Image expect(img.width, img.height, 0.0f);
    for (int r = 0; r < img.height; ++r) {
        for (int c = 1; c < img.width - 1; ++c) {
            expect.at(r, c) = std::abs(img.at(r, c + 1) - img.at(r, c - 1)) / 2.0f;
        }
    }
    for (int r = 0; r < img.height; ++r) {
        CHECK(g.at(r, 5) == doctest::Approx(0.5));
        CHECK(g.at(r, 6) == doctest::Approx(0.5));
        CHECK(g.at(r, 7) == doctest::Approx(0.0));
        CHECK(g.at(r, 8) == doctest::Approx(0.5));
        CHECK(g.at(r, 9) == doctest::Approx(0.5));
        for (int c = 1; c < img.width - 1; ++c)
            CHECK(g.at(r, c) == doctest::Approx(expect.at(r, c)));
    }
}

TEST_CASE("gradient commutes with transpose up to axis swap") {
    Image img(7, 9);
    Rng rng(5);
    for (float& v : img.px) v = static_cast<float>(rng.uniform());
    Image t(img.height, img.width);
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c) t.at(c, r) = img.at(r, c);
    const Image g = grad(img);
    const Image gt = grad(t);
    for (int r = 0; r < img.height; ++r)
        for (int c = 0; c < img.width; ++c)
            CHECK(g.at(r, c) == doctest::Approx(gt.at(c, r)).epsilon(1e-6));
}

TEST_CASE("empty lane image masks everything out") {
    const LaneImage lanes(32, 32, 0.0f);
    const Mask m = reconstruction_mask(lanes, {}, 0.5, 2.0, 4.0);
    CHECK(m.count_set() == 0);
}

TEST_CASE("mask equals the filled hull of two blobs at zero dilation") {
    LaneImage lanes(40, 30, 0.0f);
    std::vector<Vec2> above;
    auto blob = [&](int r0, int c0) {
        for (int r = r0; r < r0 + 3; ++r)
            for (int c = c0; c < c0 + 3; ++c) {
                lanes.at(r, c) = 1.0f;
                above.push_back({c + 0.5, r + 0.5});
            }
    };
    blob(4, 5);
    blob(22, 30);
    const Mask m = reconstruction_mask(lanes, {}, 0.5, 0.0, 4.0);

    // oracle: monotone-chain hull + point-in-polygon, written independently
    const std::vector<Vec2> hull = convex_hull(above);
    for (int r = 0; r < lanes.height; ++r)
        for (int c = 0; c < lanes.width; ++c) {
            const bool inside = point_in_convex_polygon({c + 0.5, r + 0.5}, hull);
            CHECK(static_cast<bool>(m.at(r, c)) == inside);
        }
}

TEST_CASE("a box covering the whole raster blanks the mask") {
    LaneImage lanes(16, 16, 1.0f);
    const Mask m =
        reconstruction_mask(lanes, {{0.0, 0.0, 16.0, 16.0}}, 0.5, 1.0, 4.0);
    CHECK(m.count_set() == 0);
}

TEST_CASE("mask is monotone in dilation") {
    LaneImage lanes(32, 32, 0.0f);
    lanes.at(10, 10) = 1.0f;
    lanes.at(20, 18) = 1.0f;
    size_t prev = 0;
    for (double dil : {0.0, 0.5, 1.0, 2.0, 4.0}) {
        const Mask m = reconstruction_mask(lanes, {}, 0.5, dil, 2.0);
        const Mask smaller = reconstruction_mask(lanes, {}, 0.5, dil * 0.5, 2.0);
        for (size_t i = 0; i < m.px.size(); ++i)
            if (smaller.px[i]) CHECK(m.px[i]);
        CHECK(m.count_set() >= prev);
        prev = m.count_set();
    }
}

TEST_CASE("masked L1 basics") {
    Image a(6, 4, 0.25f), b(6, 4, 0.25f);
    Mask all(6, 4, 1), none(6, 4, 0);
    CHECK(masked_l1(a, b, all) == 0.0);
    b.px[3] = 1.25f;
    CHECK(masked_l1(a, b, none) == 0.0);
    CHECK(masked_l1(a, b, all) == doctest::Approx(1.0));

    // exactly k unmasked unit differences sum to k
    Image c(6, 4, 0.0f), d(6, 4, 1.0f);
    Mask some(6, 4, 0);
    some.px[0] = some.px[5] = some.px[17] = 1;
    CHECK(masked_l1(c, d, some) == doctest::Approx(3.0));

    Image wrong(5, 4, 0.0f);
    CHECK_THROWS_AS(masked_l1(a, wrong, all), std::invalid_argument);
}

TEST_CASE("masked L1 is a pseudometric for a fixed mask") {
    Rng rng(17);
    Mask mask(8, 8, 0);
    for (auto& v : mask.px) v = rng.uniform() < 0.7 ? 1 : 0;
    for (int trial = 0; trial < 25; ++trial) {
        Image x(8, 8), y(8, 8), z(8, 8);
        for (float& v : x.px) v = static_cast<float>(rng.uniform());
        for (float& v : y.px) v = static_cast<float>(rng.uniform());
        for (float& v : z.px) v = static_cast<float>(rng.uniform());
        const double dxy = masked_l1(x, y, mask);
        const double dyx = masked_l1(y, x, mask);
        const double dxz = masked_l1(x, z, mask);
        const double dzy = masked_l1(z, y, mask);
        CHECK(dxy == doctest::Approx(dyx));
        CHECK(dxy <= dxz + dzy + 1e-9);
        CHECK(masked_l1(x, x, mask) == 0.0);
    }
}
