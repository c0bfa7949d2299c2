// Acceptance gate: ten checks, one PASS/FAIL line each, exit 0 only when all
// pass. Tolerances and time limits are pinned here on purpose; loosening them
// is an API change, not a test tweak.
//
// Usage: acceptance_tests --cli <path-to-stclust-binary> --fixtures <dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "stclust/clustering.hpp"
#include "stclust/errors.hpp"
#include "stclust/evaluation.hpp"
#include "stclust/ingest.hpp"
#include "stclust/synth.hpp"

namespace fs = std::filesystem;
using namespace stclust;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Every clustering run in this binary flows through these two wrappers so the
// visit-once ledger (criterion 9) covers the whole gate, not a dedicated toy.
std::uint64_t g_walk_runs = 0;
std::uint64_t g_visit_once_violations = 0;

ClusteringResult checked_dbstexc(const LabeledDataset& ds, const RangeQueryBackend& be,
                                 const ClusterParams& params) {
    const std::uint64_t before = be.query_count();
    ClusteringResult result = dbstexc(ds, be, params);
    ++g_walk_runs;
    if (be.query_count() - before != static_cast<std::uint64_t>(ds.n()))
        ++g_visit_once_violations;
    return result;
}

ClusteringResult checked_f_dbstexc(const LabeledDataset& ds, const RangeQueryBackend& be,
                                   const FuzzyParams& params) {
    const std::uint64_t before = be.query_count();
    ClusteringResult result = f_dbstexc(ds, be, params);
    ++g_walk_runs;
    if (be.query_count() - before != static_cast<std::uint64_t>(ds.n()))
        ++g_visit_once_violations;
    return result;
}

// A sweep of C cells must issue exactly C*n range queries (one walk per cell).
SweepResult checked_sweep(const LabeledDataset& ds, const RangeQueryBackend& be,
                          const QueryRegion& region, Algorithm algorithm,
                          const SweepSpec& spec) {
    std::uint64_t cells = 0;
    switch (algorithm) {
        case Algorithm::Dbscan: cells = spec.epsilons.size() * spec.n_mins.size(); break;
        case Algorithm::Dbstexc:
            cells = spec.epsilons.size() * spec.n_mins.size() * spec.n_maxs.size();
            break;
        case Algorithm::FDbstexc: cells = spec.epsilons.size() * spec.quads.size(); break;
    }
    const std::uint64_t before = be.query_count();
    SweepResult result = sweep(ds, be, region, algorithm, spec);
    g_walk_runs += cells;
    if (be.query_count() - before != cells * static_cast<std::uint64_t>(ds.n()))
        ++g_visit_once_violations;
    return result;
}

// Random instance: uniform box scatter plus a few gaussian clumps, so both
// sparse noise and dense chains show up.
LabeledDataset random_instance(std::mt19937_64& rng, int max_relevant, int max_irrelevant) {
    std::uniform_real_distribution<double> side(150.0, 700.0);
    std::uniform_int_distribution<int> n_dist(2, max_relevant);
    std::uniform_int_distribution<int> m_dist(0, max_irrelevant);
    const double box = side(rng);
    const int n = n_dist(rng);
    const int m = m_dist(rng);

    std::uniform_real_distribution<double> coord(0.0, box);
    std::uniform_int_distribution<int> clump_count(0, 3);
    std::normal_distribution<double> jitter(0.0, box / 18.0);

    LabeledDataset ds;
    auto fill = [&](std::vector<PlanarPoint>& out, int count, std::int32_t base) {
        const int clumps = clump_count(rng);
        std::vector<std::pair<double, double>> centers;
        for (int c = 0; c < clumps; ++c) centers.push_back({coord(rng), coord(rng)});
        for (int i = 0; i < count; ++i) {
            double x, y;
            if (!centers.empty() && i % 2 == 0) {
                const auto& [cx, cy] = centers[static_cast<std::size_t>(i) % centers.size()];
                x = cx + jitter(rng);
                y = cy + jitter(rng);
            } else {
                x = coord(rng);
                y = coord(rng);
            }
            out.push_back({x, y, base + i});
        }
    };
    fill(ds.relevant, n, 0);
    fill(ds.irrelevant, m, n);
    return ds;
}

ClusterParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> eps_dist(15.0, 160.0);
    std::uniform_int_distribution<int> n_min_dist(1, 6);
    std::uniform_int_distribution<int> n_max_dist(0, 5);
    return {eps_dist(rng), n_min_dist(rng), n_max_dist(rng)};
}

// --- criterion 1: walk output == brute-force oracle --------------------------

Outcome criterion_oracle(void) {
    const auto start = Clock::now();
    const double limit_s = 120.0;
    const int instances = 1000;
    std::mt19937_64 rng(101);

    for (int t = 0; t < instances; ++t) {
        const LabeledDataset ds = random_instance(rng, 120, 80);
        const ClusterParams params = random_params(rng);
        const RangeQueryBackend be(ds, BackendKind::KdTree);
        const ClusteringResult walk = checked_dbstexc(ds, be, params);
        const OracleResult oracle = oracle_cluster(ds, params);

        for (std::int32_t i = 0; i < ds.n(); ++i)
            if (walk.core_flags[static_cast<std::size_t>(i)] !=
                oracle.core_flags[static_cast<std::size_t>(i)])
                return {false, "core set mismatch at instance " + std::to_string(t)};
        if (walk.num_clusters != oracle.num_components)
            return {false, "cluster count mismatch at instance " + std::to_string(t)};
        for (std::int32_t i = 0; i < ds.n(); ++i) {
            if (!oracle.core_flags[static_cast<std::size_t>(i)]) continue;
            for (std::int32_t j = i + 1; j < ds.n(); ++j) {
                if (!oracle.core_flags[static_cast<std::size_t>(j)]) continue;
                const bool same_walk = walk.labels[static_cast<std::size_t>(i)] ==
                                       walk.labels[static_cast<std::size_t>(j)];
                const bool same_oracle =
                    oracle.core_component[static_cast<std::size_t>(i)] ==
                    oracle.core_component[static_cast<std::size_t>(j)];
                if (same_walk != same_oracle)
                    return {false, "core partition mismatch at instance " + std::to_string(t)};
            }
        }
    }
    const double secs = seconds_since(start);
    std::ostringstream os;
    os << instances << "/" << instances << " instances matched, " << secs << "s (limit "
       << limit_s << "s)";
    return {secs < limit_s, os.str()};
}

// --- criterion 2: kd-tree == linear scan ---------------------------------------

Outcome criterion_backends(void) {
    const auto start = Clock::now();
    const double limit_s = 60.0;
    std::mt19937_64 rng(202);
    std::uint64_t queries = 0;

    for (int d = 0; d < 10; ++d) {
        LabeledDataset ds;
        if (d % 2 == 0) {
            ds = random_instance(rng, 1500, 1200);
        } else {
            // Integer lattice: boundary distances land exactly on eps.
            const int side = 30;
            for (int i = 0; i < side * side; ++i)
                ds.relevant.push_back({double(i % side) * 10.0, double(i / side) * 10.0, i});
            for (int i = 0; i < side * side / 2; ++i)
                ds.irrelevant.push_back(
                    {double(i % side) * 10.0 + 5.0, double(i / side) * 10.0, side * side + i});
        }
        const RangeQueryBackend kd(ds, BackendKind::KdTree);
        const RangeQueryBackend lin(ds, BackendKind::LinearScan);

        std::uniform_real_distribution<double> coord(-50.0, 750.0);
        std::uniform_real_distribution<double> eps_dist(0.0, 260.0);
        std::uniform_int_distribution<int> exact(0, 3);
        for (int q = 0; q < 1000;) {
            const PlanarPoint p{coord(rng), coord(rng), -1};
            // every 4th query uses an integer radius so lattice hits are exact
            const double eps =
                exact(rng) == 0 ? double(int(eps_dist(rng))) : eps_dist(rng);
            if (eps <= 0.0) continue;  // redraw; zero radius is rejected by the API
            ++q;
            ++queries;
            const auto [kx, ky] = kd.range_query(p, eps);
            const auto [lx, ly] = lin.range_query(p, eps);
            if (kx != lx || ky != ly)
                return {false, "result mismatch on dataset " + std::to_string(d)};
        }
    }
    const double secs = seconds_since(start);
    std::ostringstream os;
    os << queries << " queries identical across backends, " << secs << "s (limit " << limit_s
       << "s)";
    return {queries >= 10000 && secs < limit_s, os.str()};
}

// --- criterion 3: no irrelevant points -> plain density clustering -------------

Outcome criterion_dbscan_reduction(void) {
    const int instances = 1000;
    std::mt19937_64 rng(303);
    for (int t = 0; t < instances; ++t) {
        LabeledDataset ds = random_instance(rng, 150, 0);
        ds.irrelevant.clear();
        const ClusterParams params = random_params(rng);
        const RangeQueryBackend be(ds, BackendKind::KdTree);
        const ClusteringResult tex = checked_dbstexc(ds, be, params);
        const ClusteringResult base = dbscan(ds, be, params.epsilon, params.n_min);
        if (tex.labels != base.labels || tex.core_flags != base.core_flags)
            return {false, "label mismatch at instance " + std::to_string(t)};
    }
    return {true, std::to_string(instances) + "/" + std::to_string(instances) +
                      " homogeneous instances identical to the plain-density baseline"};
}

// --- criterion 4: degenerate ramps -> crisp algorithm ---------------------------

Outcome criterion_crisp_reduction(void) {
    const int instances = 1000;
    std::mt19937_64 rng(404);
    for (int t = 0; t < instances; ++t) {
        const LabeledDataset ds = random_instance(rng, 120, 80);
        const ClusterParams params = random_params(rng);
        const FuzzyParams fuzzy{params.epsilon, params.n_min, params.n_min, params.n_max,
                                params.n_max};
        const RangeQueryBackend be(ds, BackendKind::KdTree);
        const ClusteringResult crisp = checked_dbstexc(ds, be, params);
        const ClusteringResult soft = checked_f_dbstexc(ds, be, fuzzy);
        if (crisp.labels != soft.labels || crisp.core_flags != soft.core_flags)
            return {false, "label mismatch at instance " + std::to_string(t)};
        for (std::size_t i = 0; i < soft.core_flags.size(); ++i)
            if (soft.core_flags[i] && (*soft.fuzzy_scores)[i] != 1.0)
                return {false, "core membership != 1 at instance " + std::to_string(t)};
    }
    return {true, std::to_string(instances) + "/" + std::to_string(instances) +
                      " instances: degenerate ramps equal the crisp run, all core mu = 1"};
}

// --- criterion 5: membership branch values --------------------------------------

Outcome criterion_membership(void) {
    const double tol = 1e-12;
    const FuzzyParams p{1.0, 2, 6, 1, 5};
    const struct {
        double got, want;
        const char* what;
    } cases[] = {
        {j_re(6, p), 1.0, "relevant count at the upper knee"},
        {j_re(2, p), 0.0, "relevant count at the lower knee"},
        {j_re(4, p), 0.5, "relevant count at the midpoint"},
        {j_irre(1, p), 1.0, "irrelevant count at the lower knee"},
        {j_irre(5, p), 0.0, "irrelevant count at the upper knee"},
        {j_irre(3, p), 0.5, "irrelevant count at the midpoint"},
    };
    for (const auto& c : cases)
        if (std::abs(c.got - c.want) > tol)
            return {false, std::string(c.what) + " off by more than 1e-12"};
    for (int x = 0; x <= 8; ++x)
        for (int y = 0; y <= 8; ++y)
            if (std::abs(fuzzy_score(x, y, p) - 0.5 * (j_re(x, p) + j_irre(y, p))) > tol)
                return {false, "mu != half-sum of the two ramps"};

    // Walk-level check: a cross of relevant points around one poisoned center.
    LabeledDataset ds;
    ds.relevant = {{0, 0, 0}, {0, 1, 1}, {0, -1, 2}, {1, 0, 3}, {-1, 0, 4}, {2, 0, 5}};
    ds.irrelevant = {{0.5, 0.5, 6}};
    const RangeQueryBackend be(ds, BackendKind::KdTree);
    const ClusteringResult res = checked_f_dbstexc(ds, be, FuzzyParams{1.0, 3, 5, 0, 2});
    const double expected[] = {0.75, 0.75, 0.75, 0.25, 0.75, 0.25, 0.75};
    for (std::size_t i = 0; i < 7; ++i)
        if (std::abs((*res.fuzzy_scores)[i] - expected[i]) > tol)
            return {false, "walk membership value " + std::to_string(i) + " off"};
    return {true, "ramp knees, midpoints, half-sum and walk inheritance all within 1e-12"};
}

// --- criterion 6: metric identities ----------------------------------------------

Outcome criterion_metric(void) {
    const double tol = 1e-12;
    const Confusion c{10, 5, 10};
    if (std::abs(precision_of(c) - 2.0 / 3.0) > tol) return {false, "precision != 2/3"};
    if (std::abs(recall_of(c) - 0.5) > tol) return {false, "recall != 1/2"};
    if (std::abs(f1_of(c) - 4.0 / 7.0) > tol) return {false, "f1 != 4/7"};

    for (double f1 : {0.0, 0.25, 4.0 / 7.0, 1.0}) {
        for (double area : {0.0, 0.17, 0.5, 1.0})
            if (metric_score(area, f1, 0.0) != f1)
                return {false, "alpha = 0 does not return f1 exactly"};
        for (double alpha : {0.0, 0.5, 1.0, 3.0})
            if (metric_score(1.0, f1, alpha) != f1)
                return {false, "full-coverage area does not return f1 exactly"};
    }

    // End to end: a real run scored at alpha = 0 must equal its own f1.
    std::mt19937_64 rng(606);
    const LabeledDataset ds = random_instance(rng, 120, 60);
    const RangeQueryBackend be(ds, BackendKind::KdTree);
    const ClusteringResult res = checked_dbstexc(ds, be, {60.0, 3, 4});
    QueryRegion region;
    region.radius = 800.0;
    const EvalReport rep = score(res, ds, region, 0.0, 60.0);
    if (rep.score != rep.f1) return {false, "scored run: alpha = 0 score differs from f1"};
    return {true, "4/7 confusion example, alpha = 0 and full-coverage identities exact"};
}

// --- criterion 7: the heterogeneity fixture ---------------------------------------

// A broad relevant field with one dense irrelevant mass burying part of it.
// Text-blind clustering must either swallow the mass (precision collapses) or
// fragment (recall and area collapse); the capped run keeps both.
LabeledDataset heterogeneity_fixture(std::uint64_t seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.region_radius = 1000.0;
    spec.uniform_relevant = 400;
    spec.relevant_blobs = {{300.0, 200.0, 80.0, 60}};
    spec.irrelevant_blobs = {{300.0, 200.0, 100.0, 500}};
    spec.uniform_irrelevant = 20;
    return generate(spec);
}

Outcome criterion_directional(void) {
    const auto start = Clock::now();
    const double limit_s = 120.0;
    const double required_ratio = 1.10;
    const double alpha = 0.5;

    QueryRegion region;
    region.radius = 1000.0;

    const auto best_pair = [&](const LabeledDataset& ds) {
        const RangeQueryBackend be(ds, BackendKind::KdTree);
        SweepSpec scan;
        scan.epsilons = {100.0, 150.0, 200.0};
        scan.n_mins = {3, 4, 6, 9};
        scan.alphas = {alpha};
        SweepSpec tex = scan;
        tex.n_maxs = {0, 3, 6, 10, ds.m()};
        const double best_scan =
            checked_sweep(ds, be, region, Algorithm::Dbscan, scan).best[0].report.score;
        const double best_tex =
            checked_sweep(ds, be, region, Algorithm::Dbstexc, tex).best[0].report.score;
        return std::pair<double, double>(best_scan, best_tex);
    };

    const auto [fixture_scan, fixture_tex] = best_pair(heterogeneity_fixture(424242));
    const double ratio = fixture_scan > 0.0 ? fixture_tex / fixture_scan : 0.0;

    // Containment: with the cap grid including m, the capped family can never
    // lose to the text-blind family, on any dataset.
    int containment_checked = 1, containment_failed = (fixture_tex < fixture_scan) ? 1 : 0;
    std::mt19937_64 rng(707);
    for (int t = 0; t < 30; ++t) {
        GenSpec spec;
        spec.seed = rng();
        spec.region_radius = 1000.0;
        std::uniform_int_distribution<int> blobs(0, 2);
        std::uniform_real_distribution<double> pos(-500.0, 500.0);
        std::uniform_real_distribution<double> sig(40.0, 150.0);
        std::uniform_int_distribution<int> cnt(20, 120);
        for (int b = blobs(rng); b > 0; --b)
            spec.relevant_blobs.push_back({pos(rng), pos(rng), sig(rng), cnt(rng)});
        for (int b = blobs(rng); b > 0; --b)
            spec.irrelevant_blobs.push_back({pos(rng), pos(rng), sig(rng), cnt(rng)});
        spec.uniform_relevant = 60;
        spec.uniform_irrelevant = 60;
        const auto [s, x] = best_pair(generate(spec));
        ++containment_checked;
        if (x < s) ++containment_failed;
    }

    const double secs = seconds_since(start);
    std::ostringstream os;
    os << "best capped/text-blind score ratio " << ratio << " at alpha 0.5 (need >= "
       << required_ratio << "); containment held on "
       << (containment_checked - containment_failed) << "/" << containment_checked
       << " datasets; " << secs << "s (limit " << limit_s << "s)";
    return {ratio >= required_ratio && containment_failed == 0 && secs < limit_s, os.str()};
}

// --- criterion 8: runtime scaling ---------------------------------------------------

Outcome criterion_complexity(void) {
    const auto start = Clock::now();
    const double limit_s = 300.0;
    const BenchReport report =
        run_bench(default_bench_sizes(), 3, BackendKind::LinearScan, 2024);

    const double secs = seconds_since(start);
    if (!report.slope_linear_m || !report.slope_power_m)
        return {false, "missing a fitted slope"};
    const double lin = *report.slope_linear_m;
    const double pow_ = *report.slope_power_m;
    std::ostringstream os;
    os << "log-log slope " << lin << " for m = n (want 2.0 +- 0.3), " << pow_
       << " for m = n^1.5 (want 2.5 +- 0.3); " << secs << "s (limit " << limit_s << "s)";
    const bool ok = std::abs(lin - 2.0) <= 0.3 && std::abs(pow_ - 2.5) <= 0.3;
    return {ok && secs < limit_s, os.str()};
}

// --- criterion 9: visit-once ledger ---------------------------------------------------

Outcome criterion_visit_once(void) {
    std::ostringstream os;
    os << g_walk_runs << " clustering walks issued exactly one range query per relevant "
       << "point; " << g_visit_once_violations << " violations";
    return {g_walk_runs > 2000 && g_visit_once_violations == 0, os.str()};
}

// --- criterion 10: byte-identical CLI output --------------------------------------------

Outcome criterion_determinism(const std::string& cli, const std::string& fixtures) {
    if (cli.empty() || fixtures.empty())
        return {false, "needs --cli and --fixtures arguments"};
    const fs::path fixture = fs::path(fixtures) / "tiny.csv";
    if (!fs::exists(fixture)) return {false, "missing fixture " + fixture.string()};

    std::vector<std::string> outputs;
    const fs::path base =
        fs::temp_directory_path() / ("stclust_accept_" + std::to_string(::getpid()));
    for (int run = 0; run < 3; ++run) {
        const fs::path dir = base / ("run" + std::to_string(run));
        fs::create_directories(dir);
        std::ostringstream cmd;
        cmd << '"' << cli << '"' << " cluster -i \"" << fixture.string()
            << "\" --poi-center 51.5 -0.15 -q park -e 150 --n-min 3 --n-max 2 -o \""
            << dir.string() << "\" > /dev/null 2>&1";
        if (std::system(cmd.str().c_str()) != 0) {
            fs::remove_all(base);
            return {false, "command-line run " + std::to_string(run) + " failed"};
        }
        std::ifstream in(dir / "labels.csv", std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        outputs.push_back(buf.str());
    }
    fs::remove_all(base);
    if (outputs[0].empty()) return {false, "labels.csv came back empty"};
    if (outputs[0] != outputs[1] || outputs[1] != outputs[2])
        return {false, "labels.csv differs between runs"};
    return {true, "3 command-line runs produced byte-identical labels.csv (" +
                      std::to_string(outputs[0].size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli, fixtures;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli = argv[i + 1];
        if (std::string(argv[i]) == "--fixtures") fixtures = argv[i + 1];
    }

    struct Row {
        int number;
        const char* name;
        Outcome outcome;
    };
    std::vector<Row> rows;
    rows.push_back({1, "oracle equivalence", criterion_oracle()});
    rows.push_back({2, "backend equivalence", criterion_backends()});
    rows.push_back({3, "reduction to plain density clustering", criterion_dbscan_reduction()});
    rows.push_back({4, "crisp reduction of the fuzzy walk", criterion_crisp_reduction()});
    rows.push_back({5, "membership function values", criterion_membership()});
    rows.push_back({6, "metric identities", criterion_metric()});
    rows.push_back({7, "heterogeneity fixture gain", criterion_directional()});
    rows.push_back({8, "runtime scaling slopes", criterion_complexity()});
    rows.push_back({9, "visit-once query ledger", criterion_visit_once()});
    rows.push_back({10, "byte-identical reruns", criterion_determinism(cli, fixtures)});

    int passed = 0;
    for (const Row& row : rows) {
        std::cout << (row.outcome.pass ? "[PASS]" : "[FAIL]") << " " << row.number << ". "
                  << row.name << ": " << row.outcome.detail << "\n";
        if (row.outcome.pass) ++passed;
    }
    std::cout << "acceptance: " << passed << "/" << rows.size() << " criteria passed\n";
    return passed == static_cast<int>(rows.size()) ? 0 : 1;
}
