#pragma once

#include <cstddef>
#include <vector>

namespace lanekit {

/// Bounds of the feature value range used to normalize the moment terms.
struct ValueRange {
    double lo = 0.0;
    double hi = 1.0;
};

/// n samples of dimension dim, row-major. Carries the value range the
/// samples are assumed to live in.
struct SampleSet {
    size_t dim = 0;
    std::vector<double> data;
    ValueRange range;

    size_t count() const { return dim == 0 ? 0 : data.size() / dim; }
    double at(size_t sample, size_t coord) const { return data[sample * dim + coord]; }
};

/// C x H x W tensor, c-major then row-major spatially.
struct FeatureMap {
    size_t channels = 0, height = 0, width = 0;
    std::vector<double> data;

    double at(size_t c, size_t h, size_t w) const {
        return data[(c * height + h) * width + w];
    }
};

/// Every spatial entry becomes one channels-dimensional sample; samples are
/// ordered row-major over (h, w).
SampleSet flatten_feature_map(const FeatureMap& map, ValueRange range = {0.0, 1.0});

/// Central moment discrepancy between two sample sets:
///   ||E[zs]-E[zt]|| / (b-a)  +  sum_{k=2..K} ||c_k(zs)-c_k(zt)|| / (b-a)^k
/// with coordinate-wise k-th central moments in 1/n population form.
double cmd(const SampleSet& zs, const SampleSet& zt, int order = 2,
           ValueRange range = {0.0, 1.0});

}  // namespace lanekit
