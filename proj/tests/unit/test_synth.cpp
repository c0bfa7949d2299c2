#include "doctest.h"
#include "stclust/synth.hpp"
#include "stclust/clustering.hpp"
#include "stclust/errors.hpp"
#include "stclust/geo.hpp"

#include <cmath>

using namespace stclust;

TEST_CASE("generation is deterministic and counts are exact") {
    GenSpec spec;
    spec.seed = 99;
    spec.region_radius = 500.0;
    spec.relevant_blobs = {{0, 0, 30, 40}, {100, 100, 10, 25}};
    spec.irrelevant_blobs = {{-50, 20, 15, 33}};
    spec.uniform_relevant = 17;
    spec.uniform_irrelevant = 11;

    auto a = generate(spec);
    auto b = generate(spec);
    CHECK(a.n() == 40 + 25 + 17);
    CHECK(a.m() == 33 + 11);
    REQUIRE(b.n() == a.n());
    REQUIRE(b.m() == a.m());
    for (std::int32_t i = 0; i < a.n(); ++i) {
        CHECK(a.relevant[i].x == b.relevant[i].x);
        CHECK(a.relevant[i].y == b.relevant[i].y);
        CHECK(a.relevant[i].source_index == i);
    }
    for (std::int32_t j = 0; j < a.m(); ++j) {
        CHECK(a.irrelevant[j].x == b.irrelevant[j].x);
        CHECK(a.irrelevant[j].source_index == a.n() + j);
    }
    // Everything lands inside the region disk, blob tails included.
    for (const auto& p : a.relevant) CHECK(p.x * p.x + p.y * p.y <= 500.0 * 500.0);
    for (const auto& p : a.irrelevant) CHECK(p.x * p.x + p.y * p.y <= 500.0 * 500.0);

    spec.seed = 100;
    auto c = generate(spec);
    bool all_same = true;
    for (std::int32_t i = 0; i < a.n(); ++i)
        all_same = all_same && a.relevant[i].x == c.relevant[i].x;
    CHECK_FALSE(all_same);
}

TEST_CASE("generation rejects bad parameters") {
    GenSpec spec;
    spec.region_radius = 0.0;
    CHECK_THROWS_AS(generate(spec), Error);
    spec.region_radius = 100.0;
    spec.uniform_relevant = -1;
    CHECK_THROWS_AS(generate(spec), Error);
    spec.uniform_relevant = 0;
    spec.relevant_blobs = {{0, 0, 0.0, 5}};  // sigma must be positive
    CHECK_THROWS_AS(generate(spec), Error);
    spec.relevant_blobs = {{0, 0, 1.0, -2}};
    CHECK_THROWS_AS(generate(spec), Error);
}

TEST_CASE("oracle on the poisoned chain") {
    LabeledDataset ds;
    for (int i = 0; i < 5; ++i) ds.relevant.push_back({double(i), 0.0, i});
    ds.irrelevant.push_back({2.0, 0.5, 5});
    auto oracle = oracle_cluster(ds, {1.0, 2, 0});
    CHECK(oracle.core_flags == std::vector<bool>{true, true, false, true, true});
    CHECK(oracle.num_components == 2);
    CHECK(oracle.core_component[0] == oracle.core_component[1]);
    CHECK(oracle.core_component[3] == oracle.core_component[4]);
    CHECK(oracle.core_component[0] != oracle.core_component[3]);
    CHECK(oracle.core_component[2] == -1);
}

TEST_CASE("oracle refuses oversized instances") {
    LabeledDataset ds;
    for (int i = 0; i < 10001; ++i) ds.relevant.push_back({double(i), 0.0, i});
    CHECK_THROWS_AS(oracle_cluster(ds, {1.0, 2, 0}), InstanceTooLarge);
}

TEST_CASE("walk and oracle agree on random blob scenes") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5, 6, 7, 8}) {
        GenSpec gen;
        gen.seed = seed;
        gen.region_radius = 300.0;
        gen.relevant_blobs = {{0, 0, 25, 35}, {150, 80, 20, 30}};
        gen.irrelevant_blobs = {{40, 0, 30, 25}};
        gen.uniform_relevant = 20;
        gen.uniform_irrelevant = 20;
        auto ds = generate(gen);

        for (double eps : {10.0, 22.0}) {
            for (int n_min : {3, 5}) {
                for (int n_max : {1, 4}) {
                    ClusterParams params{eps, n_min, n_max};
                    RangeQueryBackend be(ds, BackendKind::KdTree);
                    auto walk = dbstexc(ds, be, params);
                    auto oracle = oracle_cluster(ds, params);

                    REQUIRE(walk.core_flags == oracle.core_flags);
                    CHECK(walk.num_clusters == oracle.num_components);
                    // Cores must be partitioned identically.
                    for (std::int32_t i = 0; i < ds.n(); ++i) {
                        if (!oracle.core_flags[i]) continue;
                        for (std::int32_t j = i + 1; j < ds.n(); ++j) {
                            if (!oracle.core_flags[j]) continue;
                            CHECK((walk.labels[i] == walk.labels[j]) ==
                                  (oracle.core_component[i] == oracle.core_component[j]));
                        }
                    }
                    // Non-core points are clustered exactly when a core can
                    // reach them; irrelevant members follow the same rule.
                    const double eps_sq = eps * eps;
                    auto near_core = [&](const PlanarPoint& p) {
                        for (std::int32_t c = 0; c < ds.n(); ++c)
                            if (oracle.core_flags[c] &&
                                dist_sq(p, ds.relevant[c]) <= eps_sq)
                                return true;
                        return false;
                    };
                    for (std::int32_t i = 0; i < ds.n(); ++i) {
                        if (oracle.core_flags[i]) continue;
                        CHECK((walk.labels[i] != kNoiseLabel) == near_core(ds.relevant[i]));
                    }
                    for (std::int32_t j = 0; j < ds.m(); ++j)
                        CHECK((walk.labels[ds.n() + j] != kNoiseLabel) ==
                              near_core(ds.irrelevant[j]));
                }
            }
        }
    }
}

TEST_CASE("log-log slope fit recovers exact power laws") {
    std::vector<std::pair<double, double>> quad, pow25;
    for (double n : {1000.0, 2000.0, 4000.0, 8000.0}) {
        quad.emplace_back(n, 3e-9 * n * n);
        pow25.emplace_back(n, 5e-11 * std::pow(n, 2.5));
    }
    CHECK(fit_loglog_slope(quad) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit_loglog_slope(pow25) == doctest::Approx(2.5).epsilon(1e-9));
    CHECK_THROWS_AS(fit_loglog_slope({{100.0, 1.0}}), Error);
    CHECK_THROWS_AS(fit_loglog_slope({{100.0, 1.0}, {100.0, 2.0}}), Error);
    CHECK_THROWS_AS(fit_loglog_slope({{100.0, 0.0}, {200.0, 1.0}}), Error);
}

TEST_CASE("default bench sizes cover both regimes") {
    auto sizes = default_bench_sizes();
    REQUIRE(sizes.size() == 8);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(sizes[i].regime == BenchRegime::LinearM);
        CHECK(sizes[i].m == sizes[i].n);
    }
    for (std::size_t i = 4; i < 8; ++i) {
        CHECK(sizes[i].regime == BenchRegime::PowerM);
        CHECK(sizes[i].m ==
              static_cast<int>(std::llround(std::pow(sizes[i].n, 1.5))));
    }
}

TEST_CASE("bench harness validates and produces rows") {
    CHECK_THROWS_AS(run_bench({{100, 100, BenchRegime::LinearM}}, 2), Error);
    CHECK_THROWS_AS(run_bench({{200, 200, BenchRegime::LinearM},
                               {100, 100, BenchRegime::LinearM}},
                              3),
                    Error);

    std::vector<BenchSize> tiny = {{60, 60, BenchRegime::LinearM},
                                   {120, 120, BenchRegime::LinearM},
                                   {60, 460, BenchRegime::PowerM},
                                   {120, 1314, BenchRegime::PowerM}};
    auto report = run_bench(tiny, 3);
    REQUIRE(report.rows.size() == 4);
    for (const auto& row : report.rows) CHECK(row.median_seconds > 0.0);
    CHECK(report.slope_linear_m.has_value());
    CHECK(report.slope_power_m.has_value());
    CHECK(report.split_n == 60);
}
