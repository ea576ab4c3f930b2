#include "lanekit/tile_codec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace lanekit {

namespace {

constexpr double kMinTileCrossing = 1e-3;  // meters; corner touches don't occupy

struct TileKey {
    int row, col;
    bool operator<(const TileKey& o) const {
        return row < o.row || (row == o.row && col < o.col);
    }
};

}  // namespace

void TileMap::validate() const {
    grid.validate();
    std::map<TileKey, int> seen;
    for (const TileEntry& e : entries) {
        if (!grid.tile_in_bounds(e.row, e.col))
            throw std::invalid_argument("TileMap: entry outside grid at row " +
                                        std::to_string(e.row) + ", col " + std::to_string(e.col));
        if (e.conf < 0.0 || e.conf > 1.0)
            throw std::invalid_argument("TileMap: conf outside [0, 1]");
        if (std::abs(e.dx) > grid.tile_size || std::abs(e.dy) > grid.tile_size)
            throw std::invalid_argument("TileMap: |dx| or |dy| exceeds tile_size");
        if (e.theta <= -M_PI || e.theta > M_PI)
            throw std::invalid_argument("TileMap: theta outside (-pi, pi]");
        if (++seen[{e.row, e.col}] > 1)
            throw std::invalid_argument("TileMap: duplicate entry at row " +
                                        std::to_string(e.row) + ", col " + std::to_string(e.col));
    }
}

TileMap encode_tiles(const std::vector<LanePolyline>& lanes, const TopViewGrid& grid) {
    grid.validate();
    const double ts = grid.tile_size;
    const int rows = grid.tile_rows(), cols = grid.tile_cols();

    struct Best {
        double len = 0.0;
        size_t lane = 0;
        SegmentMomentAccumulator acc;
    };
    std::map<TileKey, Best> best;

    for (size_t li = 0; li < lanes.size(); ++li) {
        std::map<TileKey, SegmentMomentAccumulator> accs;
        const auto& pts = lanes[li].points;
        for (size_t k = 0; k + 1 < pts.size(); ++k) {
            const Vec2 a = pts[k], b = pts[k + 1];
            if (distance(a, b) <= 0.0) continue;
            int c0 = static_cast<int>(std::floor((std::min(a.x, b.x) - grid.x_min) / ts));
            int c1 = static_cast<int>(std::floor((std::max(a.x, b.x) - grid.x_min) / ts));
            int r0 = static_cast<int>(std::floor((std::min(a.y, b.y) - grid.y_min) / ts));
            int r1 = static_cast<int>(std::floor((std::max(a.y, b.y) - grid.y_min) / ts));
            c0 = std::max(c0, 0);
            r0 = std::max(r0, 0);
            c1 = std::min(c1, cols - 1);
            r1 = std::min(r1, rows - 1);
            for (int r = r0; r <= r1; ++r) {
                for (int c = c0; c <= c1; ++c) {
                    const Box2 box = grid.tile_box(r, c);
                    const auto clipped = clip_segment_to_box(a, b, box);
                    if (!clipped) continue;
                    // ownership of boundary-running pieces follows the
                    // half-open tile convention, decided by the midpoint
                    const Vec2 mid = (clipped->first + clipped->second) * 0.5;
                    if (!box.contains(mid)) continue;
                    accs[{r, c}].add(clipped->first, clipped->second);
                }
            }
        }
        for (const auto& [key, acc] : accs) {
            if (acc.len < kMinTileCrossing) continue;
            auto it = best.find(key);
            if (it == best.end() || acc.len > it->second.len)
                best[key] = {acc.len, li, acc};
        }
    }

    TileMap map;
    map.grid = grid;
    map.entries.reserve(best.size());
    for (const auto& [key, b] : best) {
        const auto line = b.acc.fit();
        const Vec2 center = grid.tile_center(key.row, key.col);
        // nearest point of the fitted line to the tile center
        const Vec2 q = line.point + line.dir * (center - line.point).dot(line.dir);
        TileEntry e;
        e.row = key.row;
        e.col = key.col;
        e.conf = 1.0;
        e.dx = q.x - center.x;
        e.dy = q.y - center.y;
        e.theta = line.theta;
        map.entries.push_back(e);
    }
    return map;
}

DecodedTiles decode_tiles(const TileMap& map, double conf_threshold) {
    map.validate();
    DecodedTiles out;
    out.segments.reserve(map.entries.size());
    for (const TileEntry& e : map.entries) {
        if (e.conf < conf_threshold) continue;
        const Vec2 center = map.grid.tile_center(e.row, e.col);
        const Vec2 anchor = {center.x + e.dx, center.y + e.dy};
        const Vec2 dir = {std::cos(e.theta), std::sin(e.theta)};
        const auto clipped = clip_line_to_box(anchor, dir, map.grid.tile_box(e.row, e.col));
        if (!clipped || distance(clipped->first, clipped->second) <= kMinSegmentLength) {
            ++out.skipped;
            continue;
        }
        // canonical endpoint order keeps decoding independent of entry order
        Vec2 p1 = clipped->first, p2 = clipped->second;
        if (p2.y < p1.y || (p2.y == p1.y && p2.x < p1.x)) std::swap(p1, p2);
        out.segments.push_back({{{p1, p2}, e.conf}, e.row, e.col});
    }
    return out;
}

std::vector<ScoredSegment> to_scored_segments(const DecodedTiles& decoded) {
    std::vector<ScoredSegment> out;
    out.reserve(decoded.segments.size());
    for (const TileSegment& t : decoded.segments) out.push_back(t.scored);
    return out;
}

LaneImage render_lane_image(const std::vector<LanePolyline>& lanes, const TopViewGrid& grid,
                            double line_width_m, int resolution_divisor) {
    grid.validate();
    if (line_width_m <= 0.0) throw std::invalid_argument("render_lane_image: line width <= 0");
    if (resolution_divisor < 1 || grid.width_px() % resolution_divisor != 0 ||
        grid.height_px() % resolution_divisor != 0)
        throw std::invalid_argument("render_lane_image: divisor does not divide raster dims");

    const double ppm = grid.px_per_meter / resolution_divisor;
    const double px_m = 1.0 / ppm;  // meters per output pixel
    LaneImage img(grid.width_px() / resolution_divisor, grid.height_px() / resolution_divisor);

    const double reach = line_width_m / 2.0 + px_m;  // stroke half-width plus the AA ramp
    for (const LanePolyline& lane : lanes) {
        for (size_t k = 0; k + 1 < lane.points.size(); ++k) {
            const Segment seg{lane.points[k], lane.points[k + 1]};
            if (seg.length() <= 0.0) continue;
            const double lox = std::min(seg.p1.x, seg.p2.x) - reach;
            const double hix = std::max(seg.p1.x, seg.p2.x) + reach;
            const double loy = std::min(seg.p1.y, seg.p2.y) - reach;
            const double hiy = std::max(seg.p1.y, seg.p2.y) + reach;
            const int c0 = std::max(0, static_cast<int>(std::floor((lox - grid.x_min) * ppm)));
            const int c1 =
                std::min(img.width - 1, static_cast<int>(std::floor((hix - grid.x_min) * ppm)));
            const int r0 = std::max(0, static_cast<int>(std::floor((loy - grid.y_min) * ppm)));
            const int r1 =
                std::min(img.height - 1, static_cast<int>(std::floor((hiy - grid.y_min) * ppm)));
            for (int r = r0; r <= r1; ++r) {
                const double y = grid.y_min + (r + 0.5) * px_m;
                for (int c = c0; c <= c1; ++c) {
                    const double x = grid.x_min + (c + 0.5) * px_m;
                    const double d = point_segment_distance({x, y}, seg);
                    // linear one-pixel AA ramp centered on the stroke border
                    const double cov =
                        std::clamp((line_width_m / 2.0 - d) / px_m + 0.5, 0.0, 1.0);
                    if (cov > img.at(r, c)) img.at(r, c) = static_cast<float>(cov);
                }
            }
        }
    }
    return img;
}

}  // namespace lanekit
