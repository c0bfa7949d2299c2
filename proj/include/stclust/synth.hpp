#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stclust/core.hpp"
#include "stclust/spatial_index.hpp"

namespace stclust {

// One Gaussian blob in the planar frame (meters).
struct Blob {
    double cx = 0.0, cy = 0.0;
    double sigma = 1.0;
    int count = 0;
};

// Deterministic synthetic scene: blobs plus uniform scatter, all inside the
// region disk (blob samples falling outside are redrawn, so counts are exact).
struct GenSpec {
    std::uint64_t seed = 0;
    double region_radius = 1000.0;
    std::vector<Blob> relevant_blobs, irrelevant_blobs;
    int uniform_relevant = 0, uniform_irrelevant = 0;
};

// Relevant points get source indices 0..n-1, irrelevant n..n+m-1.
LabeledDataset generate(const GenSpec& spec);

// Ground truth computed the slow, obviously-correct way: core flags from
// exhaustive neighbor counts, clusters as connected components of the
// epsilon-graph over core points. Refuses instances above 10000 points.
struct OracleResult {
    std::vector<bool> core_flags;             // per relevant point
    std::vector<std::int32_t> core_component;  // per relevant point, -1 unless core
    std::int32_t num_components = 0;
};

OracleResult oracle_cluster(const LabeledDataset& dataset, const ClusterParams& params);

// Wall-clock scaling harness. Each row runs the clustering under worst-case
// parameters (epsilon = region radius, n_min = 1, n_max = m) on uniform data
// and keeps the median of `trials` timed runs after one discarded warm-up.
// Rows are tagged with the regime their (n, m) relation belongs to so the
// log-log slope can be fitted per regime.
enum class BenchRegime : std::uint8_t { LinearM, PowerM };

struct BenchSize {
    int n = 0, m = 0;
    BenchRegime regime = BenchRegime::LinearM;
};

struct BenchRow {
    int n = 0, m = 0;
    double median_seconds = 0.0;
    BenchRegime regime = BenchRegime::LinearM;
    BackendKind backend = BackendKind::LinearScan;
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::optional<double> slope_linear_m;  // fit over the m = c*n rows
    std::optional<double> slope_power_m;   // fit over the m = n^beta rows
    std::optional<int> split_n;            // first n of the power regime
};

std::vector<BenchSize> default_bench_sizes();

BenchReport run_bench(const std::vector<BenchSize>& sizes, int trials = 3,
                      BackendKind backend = BackendKind::LinearScan,
                      std::uint64_t seed = 2024);

// Least-squares slope of log(t) against log(n); needs >= 2 rows.
double fit_loglog_slope(const std::vector<std::pair<double, double>>& n_and_seconds);

}  // namespace stclust
