#include "stclust/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "stclust/clustering.hpp"
#include "stclust/errors.hpp"
#include "stclust/geo.hpp"

namespace stclust {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<PlanarPoint> sample_side(std::mt19937_64& rng, const std::vector<Blob>& blobs,
                                     int uniform_count, double radius,
                                     std::int32_t first_index) {
    std::vector<PlanarPoint> pts;
    std::int32_t next = first_index;
    for (const Blob& blob : blobs) {
        if (blob.count < 0) throw Error("generate: blob count must be >= 0");
        if (!(blob.sigma > 0.0)) throw Error("generate: blob sigma must be positive");
        std::normal_distribution<double> dx(blob.cx, blob.sigma), dy(blob.cy, blob.sigma);
        for (int i = 0; i < blob.count; ++i) {
            double x, y;
            do {  // redraw until inside the region so counts stay exact
                x = dx(rng);
                y = dy(rng);
            } while (x * x + y * y > radius * radius);
            pts.push_back({x, y, next++});
        }
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < uniform_count; ++i) {
        const double r = radius * std::sqrt(unit(rng));
        const double theta = 2.0 * kPi * unit(rng);
        pts.push_back({r * std::cos(theta), r * std::sin(theta), next++});
    }
    return pts;
}
}  // namespace

LabeledDataset generate(const GenSpec& spec) {
    if (!(spec.region_radius > 0.0)) throw Error("generate: region_radius must be positive");
    if (spec.uniform_relevant < 0 || spec.uniform_irrelevant < 0)
        throw Error("generate: uniform counts must be >= 0");

    std::mt19937_64 rng(spec.seed);
    LabeledDataset ds;
    ds.relevant = sample_side(rng, spec.relevant_blobs, spec.uniform_relevant,
                              spec.region_radius, 0);
    ds.irrelevant = sample_side(rng, spec.irrelevant_blobs, spec.uniform_irrelevant,
                                spec.region_radius, ds.n());
    return ds;
}

OracleResult oracle_cluster(const LabeledDataset& dataset, const ClusterParams& params) {
    validate_params(params);
    const std::int32_t n = dataset.n(), m = dataset.m();
    if (static_cast<std::int64_t>(n) + m > 10000)
        throw InstanceTooLarge("oracle_cluster: instance has " + std::to_string(n + m) +
                               " points; the exhaustive oracle is capped at 10000");

    const double eps_sq = params.epsilon * params.epsilon;
    OracleResult out;
    out.core_flags.assign(n, false);
    out.core_component.assign(n, -1);

    for (std::int32_t i = 0; i < n; ++i) {
        int xc = 0, yc = 0;
        for (std::int32_t j = 0; j < n; ++j)
            xc += dist_sq(dataset.relevant[i], dataset.relevant[j]) <= eps_sq;
        for (std::int32_t j = 0; j < m; ++j)
            yc += dist_sq(dataset.relevant[i], dataset.irrelevant[j]) <= eps_sq;
        out.core_flags[i] = xc >= params.n_min && yc <= params.n_max;
    }

    // Union-find over core points; edge iff within epsilon.
    std::vector<std::int32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::int32_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::int32_t i = 0; i < n; ++i) {
        if (!out.core_flags[i]) continue;
        for (std::int32_t j = i + 1; j < n; ++j) {
            if (!out.core_flags[j]) continue;
            if (dist_sq(dataset.relevant[i], dataset.relevant[j]) <= eps_sq)
                parent[find(i)] = find(j);
        }
    }
    std::vector<std::int32_t> component_of_root(n, -1);
    std::int32_t next = 0;
    for (std::int32_t i = 0; i < n; ++i) {
        if (!out.core_flags[i]) continue;
        const std::int32_t root = find(i);
        if (component_of_root[root] < 0) component_of_root[root] = next++;
        out.core_component[i] = component_of_root[root];
    }
    out.num_components = next;
    return out;
}

std::vector<BenchSize> default_bench_sizes() {
    std::vector<BenchSize> sizes;
    for (int n : {1000, 2000, 4000, 8000}) sizes.push_back({n, n, BenchRegime::LinearM});
    for (int n : {1000, 2000, 4000, 8000})
        sizes.push_back(
            {n, static_cast<int>(std::llround(std::pow(n, 1.5))), BenchRegime::PowerM});
    return sizes;
}

double fit_loglog_slope(const std::vector<std::pair<double, double>>& n_and_seconds) {
    if (n_and_seconds.size() < 2) throw Error("fit_loglog_slope: need at least two rows");
    double sx = 0, sy = 0;
    for (const auto& [n, t] : n_and_seconds) {
        if (!(n > 0) || !(t > 0)) throw Error("fit_loglog_slope: values must be positive");
        sx += std::log(n);
        sy += std::log(t);
    }
    const double mx = sx / static_cast<double>(n_and_seconds.size());
    const double my = sy / static_cast<double>(n_and_seconds.size());
    double num = 0, den = 0;
    for (const auto& [n, t] : n_and_seconds) {
        num += (std::log(n) - mx) * (std::log(t) - my);
        den += (std::log(n) - mx) * (std::log(n) - mx);
    }
    if (den == 0.0) throw Error("fit_loglog_slope: all n equal");
    return num / den;
}

BenchReport run_bench(const std::vector<BenchSize>& sizes, int trials, BackendKind backend,
                      std::uint64_t seed) {
    if (trials < 3) throw Error("run_bench: need at least 3 trials for a median");
    int prev_linear = 0, prev_power = 0;
    for (const BenchSize& s : sizes) {
        if (s.n <= 0 || s.m < 0) throw Error("run_bench: sizes must have n > 0 and m >= 0");
        int& prev = s.regime == BenchRegime::LinearM ? prev_linear : prev_power;
        if (s.n <= prev) throw Error("run_bench: sizes must be ascending in n per regime");
        prev = s.n;
    }

    constexpr double kRadius = 10000.0;
    BenchReport report;
    for (const BenchSize& size : sizes) {
        GenSpec gen;
        // One dataset per (n, m); trials re-run the clustering on it.
        gen.seed = seed ^ (static_cast<std::uint64_t>(size.n) << 24) ^
                   static_cast<std::uint64_t>(size.m);
        gen.region_radius = kRadius;
        gen.uniform_relevant = size.n;
        gen.uniform_irrelevant = size.m;
        const LabeledDataset ds = generate(gen);
        const RangeQueryBackend rq = RangeQueryBackend::build(ds, backend);
        const ClusterParams worst{kRadius, 1, size.m};

        std::vector<double> samples;
        for (int t = 0; t <= trials; ++t) {  // t == 0 is the discarded warm-up
            const auto start = std::chrono::steady_clock::now();
            const ClusteringResult r = dbstexc(ds, rq, worst);
            const auto stop = std::chrono::steady_clock::now();
            if (r.labels.empty() && size.n > 0) throw Error("run_bench: empty result");
            if (t > 0)
                samples.push_back(std::chrono::duration<double>(stop - start).count());
        }
        std::sort(samples.begin(), samples.end());
        report.rows.push_back(
            {size.n, size.m, samples[samples.size() / 2], size.regime, backend});
    }

    std::vector<std::pair<double, double>> linear_pts, power_pts;
    for (const BenchRow& row : report.rows) {
        auto& bucket = row.regime == BenchRegime::LinearM ? linear_pts : power_pts;
        bucket.emplace_back(static_cast<double>(row.n), row.median_seconds);
        if (row.regime == BenchRegime::PowerM && !report.split_n) report.split_n = row.n;
    }
    if (linear_pts.size() >= 2) report.slope_linear_m = fit_loglog_slope(linear_pts);
    if (power_pts.size() >= 2) report.slope_power_m = fit_loglog_slope(power_pts);
    return report;
}

}  // namespace stclust
