#pragma once

#include <array>
#include <vector>

#include "lanekit/camera.hpp"
#include "lanekit/geometry.hpp"
#include "lanekit/image.hpp"

namespace lanekit {

/// One occupied tile of the semi-local lane representation: confidence plus
/// the local line through the tile, parameterized by the offset of its
/// nearest point from the tile center and its orientation. Six reserved
/// parameter slots keep the on-disk container 9 wide.
struct TileEntry {
    int row = 0;
    int col = 0;
    double conf = 1.0;
    double dx = 0.0;     // meters, |dx| <= tile_size
    double dy = 0.0;     // meters, |dy| <= tile_size
    double theta = 0.0;  // radians, canonical line angle in (-pi/2, pi/2]
    std::array<double, 6> reserved{};
};

/// Sparse per-tile map over a grid; at most one entry per (row, col).
struct TileMap {
    TopViewGrid grid;
    std::vector<TileEntry> entries;

    void validate() const;
};

/// Encode lane polylines into tiles: every tile whose interior carries at
/// least 1 mm of lane gets conf 1 and the total-least-squares line of its
/// within-tile polyline portion. When two lanes cross one tile, the longer
/// portion wins.
TileMap encode_tiles(const std::vector<LanePolyline>& lanes, const TopViewGrid& grid);

/// Decoded segment with its source tile, kept for clustering.
struct TileSegment {
    ScoredSegment scored;
    int row = 0;
    int col = 0;
};

struct DecodedTiles {
    std::vector<TileSegment> segments;
    int skipped = 0;  // entries whose line missed their tile square
};

/// Emit, for each entry with conf >= threshold, the local line clipped to
/// its tile square. Lines that miss the square are skipped and tallied.
DecodedTiles decode_tiles(const TileMap& map, double conf_threshold);

std::vector<ScoredSegment> to_scored_segments(const DecodedTiles& decoded);

/// Gray-scale anti-aliased rendering of lane polylines over the grid, values
/// in [0, 1]; raster dims are the top-view dims over resolution_divisor.
LaneImage render_lane_image(const std::vector<LanePolyline>& lanes, const TopViewGrid& grid,
                            double line_width_m = 0.15, int resolution_divisor = 4);

}  // namespace lanekit
