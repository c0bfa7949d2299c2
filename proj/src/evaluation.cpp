#include "stclust/evaluation.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "stclust/errors.hpp"
#include "stclust/geo.hpp"

namespace stclust {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool counts_as_clustered(const ClusteringResult& result, std::size_t idx, double mu_threshold) {
    if (result.labels[idx] == kNoiseLabel) return false;
    if (result.fuzzy_scores && (*result.fuzzy_scores)[idx] < mu_threshold) return false;
    return true;
}
}  // namespace

Confusion confusion(const ClusteringResult& result, const LabeledDataset& dataset,
                    double mu_threshold) {
    const std::size_t n = dataset.relevant.size(), m = dataset.irrelevant.size();
    if (result.labels.size() != n + m)
        throw Error("confusion: result does not belong to this dataset");
    Confusion c;
    for (std::size_t i = 0; i < n; ++i)
        counts_as_clustered(result, i, mu_threshold) ? ++c.tp : ++c.fn;
    for (std::size_t j = 0; j < m; ++j)
        if (counts_as_clustered(result, n + j, mu_threshold)) ++c.fp;
    return c;
}

double precision_of(const Confusion& c) {
    return c.tp + c.fp == 0 ? 0.0
                            : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall_of(const Confusion& c) {
    return c.tp + c.fn == 0 ? 0.0
                            : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double f1_of(const Confusion& c) {
    const double p = precision_of(c), r = recall_of(c);
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double metric_score(double area_norm, double f1, double alpha) {
    return std::pow(area_norm, alpha) * f1;  // pow(0, 0) == 1, so alpha 0 gives f1
}

double cluster_area(const ClusteringResult& result, const LabeledDataset& dataset,
                    const QueryRegion& region, double epsilon, const EvalOptions& opts) {
    const std::size_t n = dataset.relevant.size(), m = dataset.irrelevant.size();
    if (result.labels.size() != n + m)
        throw Error("cluster_area: result does not belong to this dataset");
    if (result.num_clusters == 0) return 0.0;

    std::vector<std::vector<PlanarPoint>> members(result.num_clusters);
    for (std::size_t idx = 0; idx < n + m; ++idx) {
        if (!counts_as_clustered(result, idx, opts.mu_threshold)) continue;
        const PlanarPoint& p =
            idx < n ? dataset.relevant[idx] : dataset.irrelevant[idx - n];
        members[result.labels[idx] - 1].push_back(p);
    }

    ShapeUnion shapes;
    shapes.clip = Disk{region.center_x, region.center_y, region.radius};
    for (const auto& pts : members) {
        if (pts.empty()) continue;
        Polygon hull = convex_hull(pts);
        if (hull.size() >= 3) {
            shapes.polygons.push_back(std::move(hull));
        } else {
            double cx = 0.0, cy = 0.0;
            for (const auto& p : pts) {
                cx += p.x;
                cy += p.y;
            }
            const auto k = static_cast<double>(pts.size());
            shapes.disks.push_back(Disk{cx / k, cy / k, epsilon});
        }
    }
    return union_area(shapes, opts.area_cell);
}

EvalReport score(const ClusteringResult& result, const LabeledDataset& dataset,
                 const QueryRegion& region, double alpha, double epsilon,
                 const EvalOptions& opts) {
    if (!(region.radius > 0.0)) throw Error("score: region radius must be positive");
    if (alpha < 0.0 || !std::isfinite(alpha)) throw Error("score: alpha must be >= 0");

    EvalReport rep;
    const Confusion c = confusion(result, dataset, opts.mu_threshold);
    rep.tp = c.tp;
    rep.fp = c.fp;
    rep.fn = c.fn;
    rep.precision = precision_of(c);
    rep.recall = recall_of(c);
    rep.f1 = f1_of(c);
    rep.area_m2 = cluster_area(result, dataset, region, epsilon, opts);
    rep.area_norm = std::clamp(rep.area_m2 / (kPi * region.radius * region.radius), 0.0, 1.0);
    rep.alpha = alpha;
    rep.score = metric_score(rep.area_norm, rep.f1, alpha);
    return rep;
}

namespace {

// Everything needed to score one grid cell once and report it per alpha.
struct Cell {
    double epsilon;
    int n_min = -1, n_max = -1;
    FuzzyQuad quad{-1, -1, -1, -1};
};

std::array<int, 4> quad_key(const SweepRow& r) {
    return {r.quad.n_min1, r.quad.n_min2, r.quad.n_max1, r.quad.n_max2};
}

// Score descending; ties prefer small epsilon, small n_min, large n_max, then
// the lexicographically smaller full parameter tuple.
bool better_than(const SweepRow& a, const SweepRow& b) {
    if (a.report.score != b.report.score) return a.report.score > b.report.score;
    if (a.epsilon != b.epsilon) return a.epsilon < b.epsilon;
    const int a_min = a.n_min >= 0 ? a.n_min : a.quad.n_min1;
    const int b_min = b.n_min >= 0 ? b.n_min : b.quad.n_min1;
    if (a_min != b_min) return a_min < b_min;
    const int a_max = a.n_max >= 0 ? a.n_max : a.quad.n_max2;
    const int b_max = b.n_max >= 0 ? b.n_max : b.quad.n_max2;
    if (a_max != b_max) return a_max > b_max;
    return quad_key(a) < quad_key(b);
}

}  // namespace

SweepResult sweep(const LabeledDataset& dataset, const RangeQueryBackend& backend,
                  const QueryRegion& region, Algorithm algorithm, const SweepSpec& spec) {
    if (spec.epsilons.empty()) throw Error("sweep: epsilon grid is empty");
    if (spec.alphas.empty()) throw Error("sweep: alpha list is empty");
    if (!(region.radius > 0.0)) throw Error("sweep: region radius must be positive");

    std::vector<Cell> cells;
    switch (algorithm) {
        case Algorithm::Dbscan:
            if (spec.n_mins.empty()) throw Error("sweep: n_min grid is empty");
            for (double eps : spec.epsilons)
                for (int n_min : spec.n_mins) cells.push_back({eps, n_min, -1});
            break;
        case Algorithm::Dbstexc:
            if (spec.n_mins.empty()) throw Error("sweep: n_min grid is empty");
            if (spec.n_maxs.empty()) throw Error("sweep: n_max grid is empty");
            for (double eps : spec.epsilons)
                for (int n_min : spec.n_mins)
                    for (int n_max : spec.n_maxs) cells.push_back({eps, n_min, n_max});
            break;
        case Algorithm::FDbstexc:
            if (spec.quads.empty()) throw Error("sweep: fuzzy parameter grid is empty");
            for (double eps : spec.epsilons)
                for (const FuzzyQuad& q : spec.quads) cells.push_back({eps, -1, -1, q});
            break;
    }

    SweepResult out;
    out.rows.reserve(cells.size() * spec.alphas.size());
    for (const Cell& cell : cells) {
        ClusteringResult run;
        switch (algorithm) {
            case Algorithm::Dbscan:
                // Density test over relevant points only; the irrelevant cap is
                // lifted, but swept-in irrelevant points still count against it.
                run = dbstexc(dataset, backend,
                              ClusterParams{cell.epsilon, cell.n_min, dataset.m()});
                break;
            case Algorithm::Dbstexc:
                run = dbstexc(dataset, backend,
                              ClusterParams{cell.epsilon, cell.n_min, cell.n_max});
                break;
            case Algorithm::FDbstexc:
                run = f_dbstexc(dataset, backend,
                                FuzzyParams{cell.epsilon, cell.quad.n_min1, cell.quad.n_min2,
                                            cell.quad.n_max1, cell.quad.n_max2});
                break;
        }
        const Confusion c = confusion(run, dataset, spec.options.mu_threshold);
        const double area = cluster_area(run, dataset, region, cell.epsilon, spec.options);
        for (double alpha : spec.alphas) {
            SweepRow row;
            row.algorithm = algorithm;
            row.epsilon = cell.epsilon;
            row.n_min = cell.n_min;
            row.n_max = cell.n_max;
            row.quad = cell.quad;
            row.report.tp = c.tp;
            row.report.fp = c.fp;
            row.report.fn = c.fn;
            row.report.precision = precision_of(c);
            row.report.recall = recall_of(c);
            row.report.f1 = f1_of(c);
            row.report.area_m2 = area;
            row.report.area_norm =
                std::clamp(area / (kPi * region.radius * region.radius), 0.0, 1.0);
            row.report.alpha = alpha;
            row.report.score = metric_score(row.report.area_norm, row.report.f1, alpha);
            out.rows.push_back(row);
        }
    }

    for (double alpha : spec.alphas) {
        const SweepRow* best = nullptr;
        for (const SweepRow& row : out.rows) {
            if (row.report.alpha != alpha) continue;
            if (!best || better_than(row, *best)) best = &row;
        }
        if (best) out.best.push_back(*best);
    }
    return out;
}

}  // namespace stclust
