#include "lanekit/seg_eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lanekit/parallel.hpp"

namespace lanekit {

namespace {

/// Overlap length of the projection of `src` onto the line of `dst`,
/// divided by |dst|; and the length of the projected segment itself over
/// |dst| for the literal rule.
struct ProjectionStats {
    double overlap_ratio;
    double projected_ratio;
    double d1, d2;  // endpoint-to-projection distances
};

ProjectionStats project_stats(const Segment& src, const Segment& dst) {
    const Vec2 u = dst.direction();
    const double len = dst.length();
    const double t1 = (src.p1 - dst.p1).dot(u);
    const double t2 = (src.p2 - dst.p1).dot(u);
    const Vec2 f1 = dst.p1 + u * t1;
    const Vec2 f2 = dst.p1 + u * t2;
    const double lo = std::min(t1, t2), hi = std::max(t1, t2);
    const double overlap = std::max(0.0, std::min(hi, len) - std::max(lo, 0.0));
    return {overlap / len, (hi - lo) / len, distance(src.p1, f1), distance(src.p2, f2)};
}

}  // namespace

double seg_dist(const Segment& p, const Segment& q, OverlapRule rule) {
    const ProjectionStats pq = project_stats(p, q);  // p projected onto line of q
    const ProjectionStats qp = project_stats(q, p);
    if (rule == OverlapRule::insufficient_overlap) {
        if (pq.overlap_ratio < 0.5 || qp.overlap_ratio < 0.5) return kInfCost;
    } else {
        if (pq.projected_ratio > 0.5 || qp.projected_ratio > 0.5) return kInfCost;
    }
    return std::max(std::max(pq.d1, pq.d2), std::max(qp.d1, qp.d2));
}

namespace {

/// Square-matrix Kuhn-Munkres with potentials, O(n^3). Costs must be finite.
std::vector<int> km_square(const std::vector<std::vector<double>>& a) {
    const int n = static_cast<int>(a.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> match(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInfCost);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = match[j0];
            int j1 = 0;
            double delta = kInfCost;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const int j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (match[j] > 0) row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

/// Solve one connected component of the finite-cost bipartite graph.
/// Forbidden edges become a sentinel larger than any possible finite total,
/// so the solver first maximizes the number of finite pairs, then minimizes
/// their cost; dummy rows/columns pad the matrix square at zero cost.
void solve_component(const std::vector<std::vector<double>>& cost, const std::vector<int>& rows,
                     const std::vector<int>& cols, Assignment& out) {
    const int nr = static_cast<int>(rows.size());
    const int nc = static_cast<int>(cols.size());
    const int k = std::max(nr, nc);
    double max_finite = 0.0;
    for (int r : rows)
        for (int c : cols)
            if (std::isfinite(cost[r][c])) max_finite = std::max(max_finite, cost[r][c]);
    const double big = (max_finite + 1.0) * (k + 1);

    std::vector<std::vector<double>> a(k, std::vector<double>(k, 0.0));
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j)
            a[i][j] = std::isfinite(cost[rows[i]][cols[j]]) ? cost[rows[i]][cols[j]] : big;

    const std::vector<int> row_to_col = km_square(a);
    for (int i = 0; i < nr; ++i) {
        const int j = row_to_col[i];
        if (j < 0 || j >= nc) continue;
        if (!std::isfinite(cost[rows[i]][cols[j]])) continue;
        out.pairs.emplace_back(rows[i], cols[j]);
        out.total_cost += cost[rows[i]][cols[j]];
    }
}

}  // namespace

Assignment hungarian(const std::vector<std::vector<double>>& cost) {
    Assignment out;
    const int n = static_cast<int>(cost.size());
    const int m = n > 0 ? static_cast<int>(cost[0].size()) : 0;
    if (n == 0 || m == 0) return out;
    for (const auto& row : cost)
        if (static_cast<int>(row.size()) != m)
            throw std::invalid_argument("hungarian: ragged cost matrix");

    // connected components of the finite-cost graph are independent
    // problems; splitting them keeps large sparse instances fast
    std::vector<int> row_comp(n, -1), col_comp(m, -1);
    int n_comp = 0;
    for (int s = 0; s < n; ++s) {
        if (row_comp[s] >= 0) continue;
        bool has_finite = false;
        std::vector<int> stack{s};
        row_comp[s] = n_comp;
        while (!stack.empty()) {
            const int r = stack.back();
            stack.pop_back();
            for (int c = 0; c < m; ++c) {
                if (!std::isfinite(cost[r][c])) continue;
                has_finite = true;
                if (col_comp[c] >= 0) continue;
                col_comp[c] = n_comp;
                for (int r2 = 0; r2 < n; ++r2) {
                    if (row_comp[r2] >= 0 || !std::isfinite(cost[r2][c])) continue;
                    row_comp[r2] = n_comp;
                    stack.push_back(r2);
                }
            }
        }
        if (has_finite)
            ++n_comp;
        else
            row_comp[s] = -1;  // isolated row, nothing to assign
    }

    for (int comp = 0; comp < n_comp; ++comp) {
        std::vector<int> rows, cols;
        for (int r = 0; r < n; ++r)
            if (row_comp[r] == comp) rows.push_back(r);
        for (int c = 0; c < m; ++c)
            if (col_comp[c] == comp) cols.push_back(c);
        solve_component(cost, rows, cols, out);
    }
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

Matching match_segments(const std::vector<ScoredSegment>& preds, const std::vector<Segment>& gts,
                        double seg_dist_max, OverlapRule rule) {
    if (seg_dist_max <= 0.0) throw std::invalid_argument("match_segments: seg_dist_max <= 0");
    std::vector<std::vector<double>> cost(preds.size(), std::vector<double>(gts.size()));
    for (size_t i = 0; i < preds.size(); ++i)
        for (size_t j = 0; j < gts.size(); ++j) {
            const double d = seg_dist(preds[i].seg, gts[j], rule);
            cost[i][j] = d < seg_dist_max ? d : kInfCost;
        }
    const Assignment a = hungarian(cost);

    Matching match;
    std::vector<bool> pred_used(preds.size(), false), gt_used(gts.size(), false);
    for (const auto& [i, j] : a.pairs) {
        match.pairs.push_back({i, j, cost[i][j]});
        pred_used[i] = true;
        gt_used[j] = true;
    }
    for (size_t i = 0; i < preds.size(); ++i)
        if (!pred_used[i]) match.unmatched_pred.push_back(static_cast<int>(i));
    for (size_t j = 0; j < gts.size(); ++j)
        if (!gt_used[j]) match.unmatched_gt.push_back(static_cast<int>(j));
    return match;
}

PRCurve pr_curve(const std::vector<ImageDetections>& images) {
    PRCurve curve;
    struct Det {
        double conf;
        bool matched;
    };
    std::vector<Det> dets;
    for (const ImageDetections& img : images) {
        curve.total_gt += img.gt_count;
        for (size_t i = 0; i < img.confidences.size(); ++i)
            dets.push_back({img.confidences[i], img.matched[i]});
    }
    if (curve.total_gt == 0)
        throw std::invalid_argument("pr_curve: no ground-truth segments; recall undefined");

    // descending confidence; stable keeps input order on ties
    std::stable_sort(dets.begin(), dets.end(),
                     [](const Det& a, const Det& b) { return a.conf > b.conf; });

    long tp = 0, fp = 0;
    curve.points.reserve(dets.size());
    for (const Det& d : dets) {
        d.matched ? ++tp : ++fp;
        curve.points.push_back({d.conf, static_cast<double>(tp) / (tp + fp),
                                static_cast<double>(tp) / curve.total_gt});
    }
    curve.tp = tp;
    curve.fp = fp;
    curve.fn = curve.total_gt - tp;
    return curve;
}

double average_precision(const PRCurve& curve) {
    if (curve.points.empty()) return 0.0;
    const size_t n = curve.points.size();
    std::vector<double> envelope(n);
    double best = 0.0;
    for (size_t i = n; i-- > 0;) {
        best = std::max(best, curve.points[i].precision);
        envelope[i] = best;
    }
    double ap = 0.0, prev_recall = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ap += (curve.points[i].recall - prev_recall) * envelope[i];
        prev_recall = curve.points[i].recall;
    }
    return ap;
}

MapReport map_eval(const std::vector<SegmentRecord>& preds, const std::vector<SegmentRecord>& gts,
                   const MapEvalOptions& options, std::vector<PRCurve>* curves_out) {
    if (options.thresholds.empty()) throw std::invalid_argument("map_eval: no thresholds");

    std::map<std::string, const SegmentRecord*> gt_by_id;
    for (const SegmentRecord& g : gts) gt_by_id[g.image_id] = &g;
    std::set<std::string> pred_ids;
    std::string offenders;
    for (const SegmentRecord& p : preds) {
        pred_ids.insert(p.image_id);
        if (!gt_by_id.count(p.image_id)) offenders += " pred-only:" + p.image_id;
    }
    for (const SegmentRecord& g : gts)
        if (!pred_ids.count(g.image_id)) offenders += " gt-only:" + g.image_id;
    if (preds.size() != pred_ids.size()) offenders += " (duplicate prediction ids)";
    if (!offenders.empty())
        throw std::invalid_argument("map_eval: image ids do not align 1:1:" + offenders);

    // distance matrices are threshold-independent; compute once per image
    struct ImageCosts {
        std::vector<std::vector<double>> cost;
        std::vector<double> confidences;
        long gt_count = 0;
    };
    std::vector<ImageCosts> per_image(preds.size());
    parallel_for(preds.size(), options.threads, [&](size_t idx) {
        const SegmentRecord& p = preds[idx];
        const SegmentRecord& g = *gt_by_id.at(p.image_id);
        ImageCosts ic;
        ic.gt_count = static_cast<long>(g.segments.size());
        ic.confidences.reserve(p.segments.size());
        for (const ScoredSegment& s : p.segments) ic.confidences.push_back(s.conf);
        ic.cost.assign(p.segments.size(), std::vector<double>(g.segments.size()));
        for (size_t i = 0; i < p.segments.size(); ++i)
            for (size_t j = 0; j < g.segments.size(); ++j)
                ic.cost[i][j] = seg_dist(p.segments[i].seg, g.segments[j].seg, options.rule);
        per_image[idx] = std::move(ic);
    });

    MapReport report;
    std::vector<std::vector<ImageDetections>> detections(
        options.thresholds.size(), std::vector<ImageDetections>(preds.size()));
    parallel_for(preds.size(), options.threads, [&](size_t idx) {
        const ImageCosts& ic = per_image[idx];
        for (size_t ti = 0; ti < options.thresholds.size(); ++ti) {
            const double tmax = options.thresholds[ti];
            std::vector<std::vector<double>> cost = ic.cost;
            for (auto& row : cost)
                for (double& c : row)
                    if (!(c < tmax)) c = kInfCost;
            const Assignment a = hungarian(cost);
            ImageDetections det;
            det.gt_count = ic.gt_count;
            det.confidences = ic.confidences;
            det.matched.assign(ic.confidences.size(), false);
            for (const auto& [i, j] : a.pairs) det.matched[i] = true;
            detections[ti][idx] = std::move(det);
        }
    });

    for (size_t ti = 0; ti < options.thresholds.size(); ++ti) {
        const PRCurve curve = pr_curve(detections[ti]);
        const double ap = average_precision(curve);
        report.ap_per_threshold.emplace_back(options.thresholds[ti], ap);
        if (curves_out) curves_out->push_back(curve);
    }
    double sum = 0.0;
    for (const auto& [t, ap] : report.ap_per_threshold) sum += ap;
    report.map = sum / report.ap_per_threshold.size();
    return report;
}

}  // namespace lanekit
