// Command-line front end: cluster | sweep | gen | bench | knn.
// Exit codes: 0 success, 2 unusable input or arguments, 1 internal failure.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stclust/clustering.hpp"
#include "stclust/errors.hpp"
#include "stclust/evaluation.hpp"
#include "stclust/geo.hpp"
#include "stclust/ingest.hpp"
#include "stclust/io.hpp"
#include "stclust/synth.hpp"

namespace fs = std::filesystem;
using namespace stclust;

namespace {

// ---- small parsing helpers --------------------------------------------------

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) return parts;
        start = pos + 1;
    }
}

double to_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw Error(what + ": '" + s + "' is not a number");
    return v;
}

int to_int(const std::string& s, const std::string& what) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw Error(what + ": '" + s + "' is not an integer");
    return v;
}

BackendKind parse_backend(const std::string& name) {
    if (name == "kdtree") return BackendKind::KdTree;
    if (name == "linear") return BackendKind::LinearScan;
    throw Error("unknown backend '" + name + "' (expected kdtree or linear)");
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "dbscan") return Algorithm::Dbscan;
    if (name == "dbstexc") return Algorithm::Dbstexc;
    if (name == "f_dbstexc") return Algorithm::FDbstexc;
    throw Error("unknown algorithm '" + name + "' (expected dbscan, dbstexc or f_dbstexc)");
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

// ---- shared ingest options ---------------------------------------------------

struct IngestArgs {
    std::string input;
    std::string format = "auto";
    std::string poi_name = "poi";
    std::vector<double> poi_center;  // lat lon
    std::vector<std::string> queries;
    double eta = 0.07;
    double r0 = 500.0;
    double step = 100.0;
    bool case_insensitive = false;
    int consecutive_limit = 3;  // 0 disables the same-spot filter
    std::vector<double> projection_origin;  // lat lon, defaults to the poi center
};

void add_ingest_options(CLI::App* cmd, IngestArgs& args) {
    cmd->add_option("-i,--input", args.input, "Records file (CSV or JSONL)")->required();
    cmd->add_option("--format", args.format, "Input format: csv, jsonl or auto")
        ->check(CLI::IsMember({"csv", "jsonl", "auto"}));
    cmd->add_option("--poi-name", args.poi_name, "Name of the point of interest");
    cmd->add_option("--poi-center", args.poi_center, "POI center: lat lon")
        ->expected(2)
        ->required();
    cmd->add_option("-q,--query", args.queries, "Relevance keyword (repeatable)")->required();
    cmd->add_option("--eta", args.eta, "Minimum relevant share a radius must keep");
    cmd->add_option("--r0", args.r0, "First candidate region radius, meters");
    cmd->add_option("--step", args.step, "Region radius increment, meters");
    cmd->add_flag("--case-insensitive", args.case_insensitive,
                  "Fold ASCII case when matching keywords");
    cmd->add_option("--consecutive-limit", args.consecutive_limit,
                    "Drop same-user same-spot runs longer than this (0 = keep everything)");
    cmd->add_option("--projection-origin", args.projection_origin,
                    "Projection anchor: lat lon (defaults to the POI center)")
        ->expected(2);
}

struct Ingested {
    std::vector<TweetRecord> records;  // post-filter; label rows refer to these
    AssembledData assembled;
};

Ingested load_and_assemble(const IngestArgs& args) {
    std::optional<RecordFormat> fmt;
    if (args.format == "csv") fmt = RecordFormat::Csv;
    if (args.format == "jsonl") fmt = RecordFormat::Jsonl;

    Ingested out;
    out.records = parse_records_file(args.input, fmt);
    if (args.consecutive_limit > 0) {
        bool warned = false;
        out.records = filter_consecutive_posts(out.records, args.consecutive_limit, &warned);
        if (warned)
            std::cerr << "note: no record carries both user_id and created_at; "
                         "the consecutive-post filter did nothing\n";
    }

    PoiSpec poi;
    poi.name = args.poi_name;
    poi.center_lat = args.poi_center.at(0);
    poi.center_lon = args.poi_center.at(1);
    poi.queries = args.queries;

    AssembleOptions opts;
    opts.eta = args.eta;
    opts.r0 = args.r0;
    opts.step = args.step;
    opts.case_sensitive = !args.case_insensitive;
    if (!args.projection_origin.empty())
        opts.projection_origin = {args.projection_origin.at(0), args.projection_origin.at(1)};

    out.assembled = assemble_dataset(out.records, poi, opts);
    if (!out.assembled.region.meets_threshold)
        std::cerr << "note: relevant share at the smallest radius is below eta; "
                     "using r0 anyway\n";
    return out;
}

void print_region(const QueryRegion& region, const LabeledDataset& ds) {
    std::cout << "region radius_m=" << format_double(region.radius)
              << " precision=" << format_double(region.precision_at_radius)
              << " relevant=" << ds.n() << " irrelevant=" << ds.m() << '\n';
}

std::vector<double> alphas_or_default(std::vector<double> alphas) {
    if (alphas.empty()) return {0.0, 0.5, 0.75, 1.0};
    return alphas;
}

// ---- cluster -----------------------------------------------------------------

struct ClusterArgs {
    IngestArgs ingest;
    std::string algorithm = "dbstexc";
    std::string backend = "kdtree";
    double epsilon = 0.0;
    int n_min = 1;
    int n_max = 0;
    int n_min1 = 0, n_min2 = 0, n_max1 = 0, n_max2 = 0;
    double mu_threshold = 0.0;
    double area_cell = 10.0;
    std::vector<double> alphas;
    std::string out_dir = ".";
};

int run_cluster(const ClusterArgs& args) {
    const Algorithm algorithm = parse_algorithm(args.algorithm);
    const BackendKind backend = parse_backend(args.backend);
    Ingested in = load_and_assemble(args.ingest);
    const LabeledDataset& ds = in.assembled.dataset;
    const QueryRegion& region = in.assembled.region;

    RangeQueryBackend be(ds, backend);
    ClusteringResult result;
    SweepRow row_proto;
    row_proto.algorithm = algorithm;
    row_proto.epsilon = args.epsilon;
    switch (algorithm) {
        case Algorithm::Dbscan:
            // Density test over relevant points only; nearby irrelevant points
            // are still swept into the clusters they fall inside.
            result = dbstexc(ds, be, ClusterParams{args.epsilon, args.n_min, ds.m()});
            row_proto.n_min = args.n_min;
            break;
        case Algorithm::Dbstexc:
            result = dbstexc(ds, be, ClusterParams{args.epsilon, args.n_min, args.n_max});
            row_proto.n_min = args.n_min;
            row_proto.n_max = args.n_max;
            break;
        case Algorithm::FDbstexc:
            result = f_dbstexc(ds, be, FuzzyParams{args.epsilon, args.n_min1, args.n_min2,
                                                   args.n_max1, args.n_max2});
            row_proto.quad = {args.n_min1, args.n_min2, args.n_max1, args.n_max2};
            break;
    }

    EvalOptions eval;
    eval.mu_threshold = args.mu_threshold;
    eval.area_cell = args.area_cell;

    std::vector<SweepRow> rows;
    for (double alpha : alphas_or_default(args.alphas)) {
        SweepRow row = row_proto;
        row.report = score(result, ds, region, alpha, args.epsilon, eval);
        rows.push_back(row);
    }

    const fs::path dir(args.out_dir);
    fs::create_directories(dir);
    {
        auto out = open_out(dir / "labels.csv");
        write_labels_csv(out, in.records, ds, result);
    }
    {
        auto out = open_out(dir / "clusters.geojson");
        write_clusters_geojson(out, ds, result, args.epsilon);
    }
    {
        auto out = open_out(dir / "report.csv");
        write_rows_csv(out, rows);
    }
    {
        auto out = open_out(dir / "map.svg");
        write_map_svg(out, ds, result, region);
    }

    print_region(region, ds);
    const EvalReport& rep = rows.front().report;
    std::cout << "clusters=" << result.num_clusters << " tp=" << rep.tp << " fp=" << rep.fp
              << " fn=" << rep.fn << " f1=" << format_double(rep.f1)
              << " area_m2=" << format_double(rep.area_m2) << '\n';
    std::cout << "wrote labels.csv clusters.geojson report.csv map.svg to " << dir.string()
              << '\n';
    return 0;
}

// ---- sweep ---------------------------------------------------------------------

struct SweepArgs {
    IngestArgs ingest;
    std::string algorithm = "dbstexc";
    std::string backend = "kdtree";
    std::vector<double> epsilons;
    std::vector<int> n_mins;
    std::vector<int> n_maxs;
    std::vector<std::string> quads;  // n_min1:n_min2:n_max1:n_max2
    std::vector<double> alphas;
    double mu_threshold = 0.0;
    double area_cell = 10.0;
    std::string out_dir = ".";
};

int run_sweep(const SweepArgs& args) {
    const Algorithm algorithm = parse_algorithm(args.algorithm);
    const BackendKind backend = parse_backend(args.backend);
    Ingested in = load_and_assemble(args.ingest);
    const LabeledDataset& ds = in.assembled.dataset;

    SweepSpec spec;
    spec.epsilons = args.epsilons;
    spec.n_mins = args.n_mins;
    spec.n_maxs = args.n_maxs;
    for (const std::string& q : args.quads) {
        const auto parts = split(q, ':');
        if (parts.size() != 4)
            throw Error("--quad wants n_min1:n_min2:n_max1:n_max2, got '" + q + "'");
        spec.quads.push_back({to_int(parts[0], "--quad"), to_int(parts[1], "--quad"),
                              to_int(parts[2], "--quad"), to_int(parts[3], "--quad")});
    }
    spec.alphas = alphas_or_default(args.alphas);
    spec.options.mu_threshold = args.mu_threshold;
    spec.options.area_cell = args.area_cell;

    RangeQueryBackend be(ds, backend);
    const SweepResult result = sweep(ds, be, in.assembled.region, algorithm, spec);

    const fs::path dir(args.out_dir);
    fs::create_directories(dir);
    {
        auto out = open_out(dir / "sweep.csv");
        write_rows_csv(out, result.rows);
    }
    {
        auto out = open_out(dir / "best.csv");
        write_rows_csv(out, result.best);
    }

    print_region(in.assembled.region, ds);
    for (const SweepRow& best : result.best) {
        std::cout << "best alpha=" << format_double(best.report.alpha)
                  << " score=" << format_double(best.report.score)
                  << " epsilon=" << format_double(best.epsilon);
        if (best.n_min >= 0) std::cout << " n_min=" << best.n_min;
        if (best.n_max >= 0) std::cout << " n_max=" << best.n_max;
        if (best.quad.n_min1 >= 0)
            std::cout << " quad=" << best.quad.n_min1 << ':' << best.quad.n_min2 << ':'
                      << best.quad.n_max1 << ':' << best.quad.n_max2;
        std::cout << '\n';
    }
    std::cout << "wrote sweep.csv best.csv to " << dir.string() << '\n';
    return 0;
}

// ---- gen -----------------------------------------------------------------------

struct GenArgs {
    std::uint64_t seed = 2024;
    double region_radius = 1000.0;
    std::vector<std::string> relevant_blobs;    // cx:cy:sigma:count
    std::vector<std::string> irrelevant_blobs;  // cx:cy:sigma:count
    int uniform_relevant = 0;
    int uniform_irrelevant = 0;
    std::vector<double> origin;  // lat lon of the planar frame
    std::string keyword = "topic";
    std::string out = "records.csv";
};

Blob parse_blob(const std::string& s) {
    const auto parts = split(s, ':');
    if (parts.size() != 4) throw Error("blob wants cx:cy:sigma:count, got '" + s + "'");
    Blob b;
    b.cx = to_double(parts[0], "blob cx");
    b.cy = to_double(parts[1], "blob cy");
    b.sigma = to_double(parts[2], "blob sigma");
    b.count = to_int(parts[3], "blob count");
    return b;
}

int run_gen(const GenArgs& args) {
    GenSpec spec;
    spec.seed = args.seed;
    spec.region_radius = args.region_radius;
    for (const auto& s : args.relevant_blobs) spec.relevant_blobs.push_back(parse_blob(s));
    for (const auto& s : args.irrelevant_blobs) spec.irrelevant_blobs.push_back(parse_blob(s));
    spec.uniform_relevant = args.uniform_relevant;
    spec.uniform_irrelevant = args.uniform_irrelevant;

    const LabeledDataset ds = generate(spec);
    const double origin_lat = args.origin.empty() ? 0.0 : args.origin.at(0);
    const double origin_lon = args.origin.empty() ? 0.0 : args.origin.at(1);
    const Projection proj = Projection::at(origin_lat, origin_lon);

    std::vector<TweetRecord> records;
    records.reserve(static_cast<std::size_t>(ds.n()) + ds.m());
    auto emit = [&](const PlanarPoint& p, bool relevant) {
        TweetRecord rec;
        rec.id = "p" + std::to_string(p.source_index);
        rec.text = relevant ? args.keyword + " spot " + std::to_string(p.source_index)
                            : "passing by " + std::to_string(p.source_index);
        const auto [lat, lon] = unproject(p.x, p.y, proj);
        rec.lat = lat;
        rec.lon = lon;
        validate_record(rec);
        records.push_back(std::move(rec));
    };
    for (const auto& p : ds.relevant) emit(p, true);
    for (const auto& p : ds.irrelevant) emit(p, false);

    const fs::path path(args.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    auto out = open_out(path);
    const std::string ext = path.extension().string();
    if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json")
        write_records_jsonl(out, records);
    else
        write_records_csv(out, records);

    std::cout << "wrote " << records.size() << " records (" << ds.n() << " relevant, "
              << ds.m() << " irrelevant) to " << path.string() << '\n';
    std::cout << "poi-center for this file: " << format_double(origin_lat) << ' '
              << format_double(origin_lon) << "; keyword: " << args.keyword << '\n';
    return 0;
}

// ---- bench ---------------------------------------------------------------------

struct BenchArgs {
    std::vector<std::string> sizes;  // n:m:linear|power
    int trials = 3;
    std::string backend = "linear";
    std::uint64_t seed = 2024;
    std::string out_dir = ".";
};

int run_bench_cmd(const BenchArgs& args) {
    std::vector<BenchSize> sizes;
    for (const std::string& s : args.sizes) {
        const auto parts = split(s, ':');
        if (parts.size() != 3)
            throw Error("--size wants n:m:linear|power, got '" + s + "'");
        BenchSize size;
        size.n = to_int(parts[0], "--size n");
        size.m = to_int(parts[1], "--size m");
        if (parts[2] == "linear")
            size.regime = BenchRegime::LinearM;
        else if (parts[2] == "power")
            size.regime = BenchRegime::PowerM;
        else
            throw Error("--size regime must be linear or power, got '" + parts[2] + "'");
        sizes.push_back(size);
    }
    if (sizes.empty()) sizes = default_bench_sizes();

    const BenchReport report = run_bench(sizes, args.trials, parse_backend(args.backend),
                                         args.seed);

    const fs::path dir(args.out_dir);
    fs::create_directories(dir);
    {
        auto out = open_out(dir / "bench.csv");
        write_bench_csv(out, report);
    }
    {
        auto out = open_out(dir / "bench_summary.json");
        out << bench_summary_json(report) << '\n';
    }

    for (const BenchRow& row : report.rows)
        std::cout << "n=" << row.n << " m=" << row.m
                  << " median_s=" << format_double(row.median_seconds) << " regime="
                  << (row.regime == BenchRegime::LinearM ? "m_linear_in_n" : "m_power_of_n")
                  << '\n';
    if (report.slope_linear_m)
        std::cout << "slope m_linear_in_n: " << format_double(*report.slope_linear_m) << '\n';
    if (report.slope_power_m)
        std::cout << "slope m_power_of_n: " << format_double(*report.slope_power_m) << '\n';
    std::cout << "wrote bench.csv bench_summary.json to " << dir.string() << '\n';
    return 0;
}

// ---- knn -----------------------------------------------------------------------

struct KnnArgs {
    IngestArgs ingest;
    int k = 4;
    std::string out_dir = ".";
};

int run_knn(const KnnArgs& args) {
    Ingested in = load_and_assemble(args.ingest);
    const auto profile = knn_distance_profile(in.assembled.dataset.relevant, args.k);

    const fs::path dir(args.out_dir);
    fs::create_directories(dir);
    {
        auto out = open_out(dir / "knn.csv");
        write_knn_csv(out, profile);
    }
    {
        auto out = open_out(dir / "knn.svg");
        write_knn_svg(out, profile, args.k);
    }

    print_region(in.assembled.region, in.assembled.dataset);
    std::cout << "k=" << args.k << " points=" << profile.size()
              << " d_median=" << format_double(profile[profile.size() / 2])
              << " d_max=" << format_double(profile.back()) << '\n';
    std::cout << "wrote knn.csv knn.svg to " << dir.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Density clustering of geo-tagged posts with keyword-aware core tests"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --config appear after the subcommand name too
    app.set_config("--config", "", "Read options from an INI/TOML file");

    ClusterArgs cluster_args;
    auto* cluster_cmd =
        app.add_subcommand("cluster", "Cluster one dataset and write labels and shapes");
    add_ingest_options(cluster_cmd, cluster_args.ingest);
    cluster_cmd->add_option("-a,--algorithm", cluster_args.algorithm,
                            "dbscan, dbstexc or f_dbstexc (dbscan ignores the irrelevant cap)");
    cluster_cmd->add_option("--backend", cluster_args.backend, "kdtree or linear");
    cluster_cmd->add_option("-e,--epsilon", cluster_args.epsilon, "Neighborhood radius, meters")
        ->required();
    cluster_cmd->add_option("--n-min", cluster_args.n_min, "Minimum relevant neighbors");
    cluster_cmd->add_option("--n-max", cluster_args.n_max, "Maximum irrelevant neighbors");
    cluster_cmd->add_option("--n-min1", cluster_args.n_min1, "Fuzzy: relevant ramp start");
    cluster_cmd->add_option("--n-min2", cluster_args.n_min2, "Fuzzy: relevant ramp end");
    cluster_cmd->add_option("--n-max1", cluster_args.n_max1, "Fuzzy: irrelevant ramp start");
    cluster_cmd->add_option("--n-max2", cluster_args.n_max2, "Fuzzy: irrelevant ramp end");
    cluster_cmd->add_option("--mu-threshold", cluster_args.mu_threshold,
                            "Evaluation: drop members scoring below this");
    cluster_cmd->add_option("--area-cell", cluster_args.area_cell,
                            "Raster cell size for cluster area, meters");
    cluster_cmd->add_option("--alpha", cluster_args.alphas,
                            "Compactness exponent (repeatable; default 0 0.5 0.75 1)");
    cluster_cmd->add_option("-o,--out-dir", cluster_args.out_dir, "Output directory");

    SweepArgs sweep_args;
    auto* sweep_cmd =
        app.add_subcommand("sweep", "Grid-search parameters and report the best per alpha");
    add_ingest_options(sweep_cmd, sweep_args.ingest);
    sweep_cmd->add_option("-a,--algorithm", sweep_args.algorithm,
                          "dbscan, dbstexc or f_dbstexc");
    sweep_cmd->add_option("--backend", sweep_args.backend, "kdtree or linear");
    sweep_cmd->add_option("-e,--epsilon", sweep_args.epsilons, "Epsilon grid (repeatable)")
        ->required();
    sweep_cmd->add_option("--n-min", sweep_args.n_mins, "n_min grid (repeatable)");
    sweep_cmd->add_option("--n-max", sweep_args.n_maxs, "n_max grid (repeatable)");
    sweep_cmd->add_option("--quad", sweep_args.quads,
                          "Fuzzy cell n_min1:n_min2:n_max1:n_max2 (repeatable)");
    sweep_cmd->add_option("--alpha", sweep_args.alphas,
                          "Compactness exponent (repeatable; default 0 0.5 0.75 1)");
    sweep_cmd->add_option("--mu-threshold", sweep_args.mu_threshold,
                          "Evaluation: drop members scoring below this");
    sweep_cmd->add_option("--area-cell", sweep_args.area_cell,
                          "Raster cell size for cluster area, meters");
    sweep_cmd->add_option("-o,--out-dir", sweep_args.out_dir, "Output directory");

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic labeled records file");
    gen_cmd->add_option("--seed", gen_args.seed, "RNG seed");
    gen_cmd->add_option("--region-radius", gen_args.region_radius,
                        "Scene radius around the origin, meters");
    gen_cmd->add_option("--relevant-blob", gen_args.relevant_blobs,
                        "Relevant blob cx:cy:sigma:count in meters (repeatable)");
    gen_cmd->add_option("--irrelevant-blob", gen_args.irrelevant_blobs,
                        "Irrelevant blob cx:cy:sigma:count in meters (repeatable)");
    gen_cmd->add_option("--uniform-relevant", gen_args.uniform_relevant,
                        "Relevant points scattered uniformly in the region");
    gen_cmd->add_option("--uniform-irrelevant", gen_args.uniform_irrelevant,
                        "Irrelevant points scattered uniformly in the region");
    gen_cmd->add_option("--origin", gen_args.origin, "lat lon of the scene origin")
        ->expected(2);
    gen_cmd->add_option("--keyword", gen_args.keyword,
                        "Keyword planted in every relevant text");
    gen_cmd->add_option("-o,--out", gen_args.out,
                        "Output records file (.csv, .jsonl or .ndjson)");

    BenchArgs bench_args;
    auto* bench_cmd =
        app.add_subcommand("bench", "Time worst-case clustering runs across sizes");
    bench_cmd->add_option("--size", bench_args.sizes,
                          "n:m:linear|power (repeatable; default ladder when omitted)");
    bench_cmd->add_option("--trials", bench_args.trials, "Timed runs per size (median kept)");
    bench_cmd->add_option("--backend", bench_args.backend, "kdtree or linear");
    bench_cmd->add_option("--seed", bench_args.seed, "RNG seed for the scenes");
    bench_cmd->add_option("-o,--out-dir", bench_args.out_dir, "Output directory");

    KnnArgs knn_args;
    auto* knn_cmd = app.add_subcommand(
        "knn", "Distance-to-kth-neighbor profile of the relevant points");
    add_ingest_options(knn_cmd, knn_args.ingest);
    knn_cmd->add_option("-k", knn_args.k, "Neighbor rank");
    knn_cmd->add_option("-o,--out-dir", knn_args.out_dir, "Output directory");

    try {
        app.parse(argc, argv);
        if (*cluster_cmd) return run_cluster(cluster_args);
        if (*sweep_cmd) return run_sweep(sweep_args);
        if (*gen_cmd) return run_gen(gen_args);
        if (*bench_cmd) return run_bench_cmd(bench_args);
        if (*knn_cmd) return run_knn(knn_args);
        return 2;  // unreachable with require_subcommand(1)
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version exit clean, usage errors exit 2
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}
