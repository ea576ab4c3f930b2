#pragma once

#include <cstdint>

#include "lanekit/tile_codec.hpp"

namespace lanekit {

/// Controlled degradation of ground-truth tile maps into detector-like
/// predictions so the evaluation stack can be exercised without a trained
/// network. All randomness flows from the seed.
struct PerturbSpec {
    double lateral_sigma_m = 0.0;  // Gaussian shift of the local line along its normal
    double conf_sigma = 0.0;       // confidence degraded by |N(0, sigma)|
    double dropout = 0.0;          // per-tile drop probability
    double spurious_rate = 0.0;    // expected spurious tiles per image (Poisson)
    uint64_t seed = 0;

    void validate() const;
};

/// Deterministic in (spec.seed, image_index), independent of thread count.
TileMap perturb_tiles(const TileMap& gt, const PerturbSpec& spec, uint64_t image_index);

}  // namespace lanekit
