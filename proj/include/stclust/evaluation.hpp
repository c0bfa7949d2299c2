#pragma once

#include <cstdint>
#include <vector>

#include "stclust/clustering.hpp"
#include "stclust/core.hpp"
#include "stclust/ingest.hpp"
#include "stclust/spatial_index.hpp"

namespace stclust {

struct Confusion {
    std::int64_t tp = 0;  // relevant points in clusters
    std::int64_t fp = 0;  // irrelevant points in clusters
    std::int64_t fn = 0;  // relevant points left as noise
};

struct EvalOptions {
    // Fuzzy results are evaluated crisply; a point counts as clustered iff its
    // label is not noise and (when scores exist) its score is >= mu_threshold.
    double mu_threshold = 0.0;
    double area_cell = 10.0;  // raster resolution for cluster area, meters
};

Confusion confusion(const ClusteringResult& result, const LabeledDataset& dataset,
                    double mu_threshold = 0.0);

// 0 when nothing is clustered (the tp+fp == 0 / tp+fn == 0 conventions).
double precision_of(const Confusion& c);
double recall_of(const Confusion& c);
double f1_of(const Confusion& c);

// area_norm^alpha * f1, with 0^0 == 1 so alpha = 0 degrades to plain F1.
double metric_score(double area_norm, double f1, double alpha);

// Union of per-cluster convex hulls of member points, clipped to the region
// disk. A cluster whose members don't span a triangle contributes an
// epsilon-disk at its centroid instead.
double cluster_area(const ClusteringResult& result, const LabeledDataset& dataset,
                    const QueryRegion& region, double epsilon, const EvalOptions& opts = {});

struct EvalReport {
    std::int64_t tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    double area_m2 = 0.0;
    double area_norm = 0.0;  // area / (pi * radius^2), clamped to [0, 1]
    double alpha = 0.0;
    double score = 0.0;
};

EvalReport score(const ClusteringResult& result, const LabeledDataset& dataset,
                 const QueryRegion& region, double alpha, double epsilon,
                 const EvalOptions& opts = {});

enum class Algorithm : std::uint8_t { Dbscan, Dbstexc, FDbstexc };

struct FuzzyQuad {
    int n_min1 = 1, n_min2 = 1, n_max1 = 0, n_max2 = 0;
};

struct SweepSpec {
    std::vector<double> epsilons;
    std::vector<int> n_mins;       // dbscan + dbstexc cells
    std::vector<int> n_maxs;       // dbstexc cells
    std::vector<FuzzyQuad> quads;  // f_dbstexc cells
    std::vector<double> alphas;
    EvalOptions options;
};

struct SweepRow {
    Algorithm algorithm = Algorithm::Dbstexc;
    double epsilon = 0.0;
    int n_min = -1, n_max = -1;              // -1 = not a parameter of this cell
    FuzzyQuad quad{-1, -1, -1, -1};
    EvalReport report;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // every cell x alpha, in grid order
    std::vector<SweepRow> best;  // argmax per alpha, deterministic tie-breaking
};

// Exhaustive grid evaluation for one algorithm. A dbscan cell ignores the
// irrelevant counts when forming cores (the cap is lifted to m), but its
// clusters still sweep in nearby irrelevant points, which is what makes the
// comparison against the text-aware runs meaningful. Ties on score go to the
// smaller epsilon, then smaller n_min, then larger n_max, then the smaller
// parameter tuple.
SweepResult sweep(const LabeledDataset& dataset, const RangeQueryBackend& backend,
                  const QueryRegion& region, Algorithm algorithm, const SweepSpec& spec);

}  // namespace stclust
