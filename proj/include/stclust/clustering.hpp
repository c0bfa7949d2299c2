#pragma once

#include <vector>

#include "stclust/core.hpp"
#include "stclust/spatial_index.hpp"

namespace stclust {

// Crisp core test for one relevant point: >= n_min relevant neighbors (self
// included) and <= n_max irrelevant neighbors within epsilon. Issues one
// range query.
bool is_core(const LabeledDataset& dataset, const RangeQueryBackend& backend,
             std::int32_t x_index, const ClusterParams& params);

// Density clustering over the relevant points with the irrelevant points
// acting as a brake: cores must stay under the irrelevant-count cap. Only
// relevant points are range-queried, each exactly once. Irrelevant points
// inside the accumulated neighborhoods of a cluster's cores join that cluster
// at the end of its expansion. Unreached points stay kNoiseLabel.
ClusteringResult dbstexc(const LabeledDataset& dataset, const RangeQueryBackend& backend,
                         const ClusterParams& params);

// Fuzzy variant: same walk with the relaxed core test (>= n_min1 relevant,
// <= n_max2 irrelevant) and a membership score per clustered point. Cores
// carry their own score; border and irrelevant members inherit the score of
// the core whose range query first reached them.
ClusteringResult f_dbstexc(const LabeledDataset& dataset, const RangeQueryBackend& backend,
                           const FuzzyParams& params);

// Classic DBSCAN over the relevant points alone; irrelevant points are
// ignored entirely and stay noise. Kept as an independent implementation so
// the homogeneous-input equivalence with dbstexc is a real cross-check.
ClusteringResult dbscan(const LabeledDataset& dataset, const RangeQueryBackend& backend,
                        double epsilon, int n_min);

// Relevant-count membership ramp: 0 at or below n_min1, 1 at or above n_min2,
// linear between. Degenerate (n_min1 == n_min2) collapses to a step.
double j_re(int x_count, const FuzzyParams& params);

// Irrelevant-count membership ramp: 1 at or below n_max1, 0 at or above
// n_max2, linear between. Degenerate (n_max1 == n_max2) collapses to a step.
double j_irre(int y_count, const FuzzyParams& params);

// Average of the two ramps; the per-point score mu.
double fuzzy_score(int x_count, int y_count, const FuzzyParams& params);

// Distance from every point to its k-th nearest other point, sorted
// ascending. Throws KTooLarge when k >= points.size().
std::vector<double> knn_distance_profile(const std::vector<PlanarPoint>& points, int k);

}  // namespace stclust
