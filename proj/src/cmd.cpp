#include "lanekit/cmd.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace lanekit {

namespace {

/// Pairwise (tree) reduction: deterministic and order-stable regardless of
/// how callers might shard the coordinate loop.
double pairwise_sum(const std::function<double(size_t)>& term, size_t lo, size_t hi) {
    const size_t n = hi - lo;
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = lo; i < hi; ++i) s += term(i);
        return s;
    }
    const size_t mid = lo + n / 2;
    return pairwise_sum(term, lo, mid) + pairwise_sum(term, mid, hi);
}

std::vector<double> coordinate_means(const SampleSet& z) {
    const size_t n = z.count(), d = z.dim;
    std::vector<double> mean(d);
    for (size_t c = 0; c < d; ++c)
        mean[c] = pairwise_sum([&](size_t i) { return z.at(i, c); }, 0, n) / n;
    return mean;
}

std::vector<double> central_moment(const SampleSet& z, const std::vector<double>& mean, int k) {
    const size_t n = z.count(), d = z.dim;
    std::vector<double> out(d);
    for (size_t c = 0; c < d; ++c)
        out[c] = pairwise_sum(
                     [&](size_t i) { return std::pow(z.at(i, c) - mean[c], k); }, 0, n) /
                 n;
    return out;
}

double l2_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

SampleSet flatten_feature_map(const FeatureMap& map, ValueRange range) {
    if (map.channels == 0 || map.height == 0 || map.width == 0)
        throw std::invalid_argument("flatten_feature_map: empty tensor");
    SampleSet out;
    out.dim = map.channels;
    out.range = range;
    out.data.resize(map.height * map.width * map.channels);
    size_t s = 0;
    for (size_t h = 0; h < map.height; ++h)
        for (size_t w = 0; w < map.width; ++w, ++s)
            for (size_t c = 0; c < map.channels; ++c) out.data[s * map.channels + c] = map.at(c, h, w);
    return out;
}

double cmd(const SampleSet& zs, const SampleSet& zt, int order, ValueRange range) {
    if (zs.dim == 0 || zs.dim != zt.dim)
        throw std::invalid_argument("cmd: sample dimension mismatch");
    if (zs.count() < 1 || zt.count() < 1) throw std::invalid_argument("cmd: empty sample set");
    if (!(range.hi > range.lo)) throw std::invalid_argument("cmd: range must have b > a");
    if (order < 1) throw std::invalid_argument("cmd: order must be >= 1");

    const double span = range.hi - range.lo;
    const auto mean_s = coordinate_means(zs);
    const auto mean_t = coordinate_means(zt);
    double total = l2_diff(mean_s, mean_t) / span;
    for (int k = 2; k <= order; ++k)
        total += l2_diff(central_moment(zs, mean_s, k), central_moment(zt, mean_t, k)) /
                 std::pow(span, k);
    return total;
}

}  // namespace lanekit
