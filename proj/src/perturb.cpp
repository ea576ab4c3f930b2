#include "lanekit/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lanekit/rng.hpp"

namespace lanekit {

void PerturbSpec::validate() const {
    if (lateral_sigma_m < 0.0 || conf_sigma < 0.0)
        throw std::invalid_argument("PerturbSpec: negative sigma");
    if (dropout < 0.0 || dropout > 1.0)
        throw std::invalid_argument("PerturbSpec: dropout outside [0, 1]");
    if (spurious_rate < 0.0) throw std::invalid_argument("PerturbSpec: negative spurious rate");
}

TileMap perturb_tiles(const TileMap& gt, const PerturbSpec& spec, uint64_t image_index) {
    spec.validate();
    gt.validate();
    Rng rng(mix_seed(spec.seed, image_index));
    const double ts = gt.grid.tile_size;

    TileMap out;
    out.grid = gt.grid;
    std::set<std::pair<int, int>> occupied;
    for (const TileEntry& e : gt.entries) {
        const double drop_draw = rng.uniform();
        const double lateral = rng.normal(spec.lateral_sigma_m);
        const double conf_noise = std::abs(rng.normal(spec.conf_sigma));
        if (drop_draw < spec.dropout) continue;
        TileEntry p = e;
        // shift the local line along its normal; (dx, dy) stays the
        // nearest-point form because the shift is orthogonal to the line
        p.dx = std::clamp(e.dx - lateral * std::sin(e.theta), -ts, ts);
        p.dy = std::clamp(e.dy + lateral * std::cos(e.theta), -ts, ts);
        p.conf = std::clamp(e.conf - conf_noise, 0.0, 1.0);
        out.entries.push_back(p);
        occupied.insert({p.row, p.col});
    }

    const int spurious = rng.poisson(spec.spurious_rate);
    for (int k = 0; k < spurious; ++k) {
        const int row = rng.uniform_int(0, gt.grid.tile_rows() - 1);
        const int col = rng.uniform_int(0, gt.grid.tile_cols() - 1);
        const double offset = rng.uniform(-ts / 2.0, ts / 2.0);
        const double theta = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
        const double conf = rng.uniform();
        if (occupied.count({row, col})) continue;  // keep one entry per tile
        occupied.insert({row, col});
        TileEntry e;
        e.row = row;
        e.col = col;
        e.conf = conf;
        e.dx = -offset * std::sin(theta);
        e.dy = offset * std::cos(theta);
        e.theta = theta;
        out.entries.push_back(e);
    }

    std::sort(out.entries.begin(), out.entries.end(), [](const TileEntry& a, const TileEntry& b) {
        return a.row < b.row || (a.row == b.row && a.col < b.col);
    });
    return out;
}

}  // namespace lanekit
