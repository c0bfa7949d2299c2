#include "stclust/clustering.hpp"

#include <algorithm>
#include <cmath>

#include "stclust/errors.hpp"
#include "stclust/geo.hpp"

namespace stclust {

namespace {

// Shared walk for the crisp and fuzzy variants. A point is core when it has
// at least min_x relevant and at most max_y irrelevant neighbors; fuzzy mode
// additionally records membership scores. Every relevant point is visited,
// and therefore range-queried, exactly once.
ClusteringResult run_walk(const LabeledDataset& ds, const RangeQueryBackend& backend,
                          double epsilon, int min_x, int max_y, const FuzzyParams* fuzzy) {
    const std::int32_t n = ds.n(), m = ds.m();
    ClusteringResult res;
    res.labels.assign(static_cast<std::size_t>(n) + m, kNoiseLabel);
    res.core_flags.assign(n, false);
    if (fuzzy) res.fuzzy_scores.emplace(static_cast<std::size_t>(n) + m, 0.0);

    std::vector<char> visited_x(n, 0), visited_y(m, 0);
    std::vector<std::int32_t> enqueued(n, 0);   // cluster id that queued an X point
    std::vector<std::int32_t> gathered(m, 0);   // cluster id that gathered a Y point
    std::vector<std::int32_t> found_by_x(n, -1), found_by_y(m, -1);  // discovering core
    std::vector<double> mu(n, 0.0);             // own score of each queried X point
    std::vector<std::int32_t> frontier, y_members, qx, qy;

    std::int32_t cluster = 0;
    for (std::int32_t seed = 0; seed < n; ++seed) {
        if (visited_x[seed]) continue;
        visited_x[seed] = 1;
        backend.range_query(ds.relevant[seed], epsilon, qx, qy);
        const auto xc = static_cast<int>(qx.size());
        const auto yc = static_cast<int>(qy.size());
        res.core_flags[seed] = xc >= min_x && yc <= max_y;
        if (fuzzy) mu[seed] = fuzzy_score(xc, yc, *fuzzy);
        if (!res.core_flags[seed]) continue;

        ++cluster;
        res.labels[seed] = cluster;
        if (fuzzy) (*res.fuzzy_scores)[seed] = mu[seed];

        frontier.clear();
        y_members.clear();
        auto merge = [&](std::int32_t from) {
            for (std::int32_t q : qx)
                if (enqueued[q] != cluster) {
                    enqueued[q] = cluster;
                    found_by_x[q] = from;
                    frontier.push_back(q);
                }
            for (std::int32_t q : qy)
                if (gathered[q] != cluster) {
                    gathered[q] = cluster;
                    found_by_y[q] = from;
                    y_members.push_back(q);
                }
        };
        merge(seed);

        for (std::size_t head = 0; head < frontier.size(); ++head) {
            const std::int32_t p = frontier[head];
            if (!visited_x[p]) {
                visited_x[p] = 1;
                backend.range_query(ds.relevant[p], epsilon, qx, qy);
                const auto pxc = static_cast<int>(qx.size());
                const auto pyc = static_cast<int>(qy.size());
                res.core_flags[p] = pxc >= min_x && pyc <= max_y;
                if (fuzzy) mu[p] = fuzzy_score(pxc, pyc, *fuzzy);
                if (res.core_flags[p]) merge(p);
            }
            if (res.labels[p] == kNoiseLabel) {
                res.labels[p] = cluster;
                if (fuzzy)
                    (*res.fuzzy_scores)[p] = res.core_flags[p] ? mu[p] : mu[found_by_x[p]];
            }
        }

        // Irrelevant points inside any member core's neighborhood join last.
        for (std::int32_t q : y_members) {
            if (visited_y[q]) continue;
            visited_y[q] = 1;
            if (res.labels[n + q] == kNoiseLabel) {
                res.labels[n + q] = cluster;
                if (fuzzy) (*res.fuzzy_scores)[n + q] = mu[found_by_y[q]];
            }
        }
    }
    res.num_clusters = cluster;
    return res;
}

}  // namespace

bool is_core(const LabeledDataset& dataset, const RangeQueryBackend& backend,
             std::int32_t x_index, const ClusterParams& params) {
    validate_params(params);
    if (x_index < 0 || x_index >= dataset.n())
        throw Error("is_core: x_index out of range");
    auto [qx, qy] = backend.range_query(dataset.relevant[x_index], params.epsilon);
    return static_cast<int>(qx.size()) >= params.n_min &&
           static_cast<int>(qy.size()) <= params.n_max;
}

ClusteringResult dbstexc(const LabeledDataset& dataset, const RangeQueryBackend& backend,
                         const ClusterParams& params) {
    validate_params(params);
    return run_walk(dataset, backend, params.epsilon, params.n_min, params.n_max, nullptr);
}

ClusteringResult f_dbstexc(const LabeledDataset& dataset, const RangeQueryBackend& backend,
                           const FuzzyParams& params) {
    validate_params(params);
    return run_walk(dataset, backend, params.epsilon, params.n_min1, params.n_max2, &params);
}

ClusteringResult dbscan(const LabeledDataset& dataset, const RangeQueryBackend& backend,
                        double epsilon, int n_min) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error("epsilon must be positive");
    if (n_min < 1) throw Error("n_min must be >= 1");

    const std::int32_t n = dataset.n(), m = dataset.m();
    ClusteringResult res;
    res.labels.assign(static_cast<std::size_t>(n) + m, kNoiseLabel);
    res.core_flags.assign(n, false);

    enum : char { kUndefined = 0, kTentativeNoise = 1, kDecided = 2 };
    std::vector<char> state(n, kUndefined);
    std::vector<std::int32_t> queue, qx, qy;

    std::int32_t cluster = 0;
    for (std::int32_t i = 0; i < n; ++i) {
        if (state[i] != kUndefined) continue;
        backend.range_query(dataset.relevant[i], epsilon, qx, qy);
        res.core_flags[i] = static_cast<int>(qx.size()) >= n_min;
        if (!res.core_flags[i]) {
            state[i] = kTentativeNoise;
            continue;
        }
        ++cluster;
        state[i] = kDecided;
        res.labels[i] = cluster;
        queue.assign(qx.begin(), qx.end());
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::int32_t q = queue[head];
            if (state[q] == kTentativeNoise) {  // known non-core: border point
                state[q] = kDecided;
                res.labels[q] = cluster;
                continue;
            }
            if (state[q] == kDecided) continue;
            state[q] = kDecided;
            res.labels[q] = cluster;
            backend.range_query(dataset.relevant[q], epsilon, qx, qy);
            res.core_flags[q] = static_cast<int>(qx.size()) >= n_min;
            if (res.core_flags[q]) queue.insert(queue.end(), qx.begin(), qx.end());
        }
    }
    res.num_clusters = cluster;
    return res;
}

double j_re(int x_count, const FuzzyParams& params) {
    if (params.n_min1 == params.n_min2) return x_count >= params.n_min1 ? 1.0 : 0.0;
    if (x_count >= params.n_min2) return 1.0;
    if (x_count <= params.n_min1) return 0.0;
    return static_cast<double>(x_count - params.n_min1) /
           static_cast<double>(params.n_min2 - params.n_min1);
}

double j_irre(int y_count, const FuzzyParams& params) {
    if (params.n_max1 == params.n_max2) return y_count <= params.n_max1 ? 1.0 : 0.0;
    if (y_count <= params.n_max1) return 1.0;
    if (y_count >= params.n_max2) return 0.0;
    return static_cast<double>(params.n_max2 - y_count) /
           static_cast<double>(params.n_max2 - params.n_max1);
}

double fuzzy_score(int x_count, int y_count, const FuzzyParams& params) {
    return 0.5 * (j_re(x_count, params) + j_irre(y_count, params));
}

std::vector<double> knn_distance_profile(const std::vector<PlanarPoint>& points, int k) {
    const auto count = static_cast<std::int32_t>(points.size());
    if (k < 1) throw Error("knn_distance_profile: k must be >= 1");
    if (k >= count)
        throw KTooLarge("k = " + std::to_string(k) + " but only " + std::to_string(count) +
                        " points are available");
    std::vector<double> profile(count);
    std::vector<double> row(count - 1);
    for (std::int32_t i = 0; i < count; ++i) {
        std::size_t w = 0;
        for (std::int32_t j = 0; j < count; ++j)
            if (j != i) row[w++] = dist_sq(points[i], points[j]);
        std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
        profile[i] = std::sqrt(row[k - 1]);
    }
    std::sort(profile.begin(), profile.end());
    return profile;
}

}  // namespace stclust
