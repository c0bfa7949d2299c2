// Python bindings for the clustering toolkit. Mirrors the C++ API; heavy
// calls drop the GIL.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stclust/clustering.hpp"
#include "stclust/errors.hpp"
#include "stclust/evaluation.hpp"
#include "stclust/geo.hpp"
#include "stclust/ingest.hpp"
#include "stclust/io.hpp"
#include "stclust/synth.hpp"
#include "stclust/timeparse.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace stclust;

PYBIND11_MODULE(_stclust, m) {
    m.doc() = "Density clustering of geo-tagged posts with keyword-aware core tests";

    // Exceptions: base first so the derived registrations below shadow it.
    auto err = py::register_exception<Error>(m, "Error");
    py::register_exception<OutOfRangeCoordinate>(m, "OutOfRangeCoordinate", err.ptr());
    py::register_exception<MalformedText>(m, "MalformedText", err.ptr());
    py::register_exception<ParseError>(m, "ParseError", err.ptr());
    py::register_exception<EmptyRelevantSet>(m, "EmptyRelevantSet", err.ptr());
    py::register_exception<KTooLarge>(m, "KTooLarge", err.ptr());
    py::register_exception<InstanceTooLarge>(m, "InstanceTooLarge", err.ptr());

    // ---- records and geometry ------------------------------------------------

    py::class_<TweetRecord>(m, "TweetRecord")
        .def(py::init<>())
        .def(py::init([](std::string id, std::string text, double lat, double lon,
                         std::optional<std::string> user_id,
                         std::optional<std::int64_t> created_at) {
                 TweetRecord r;
                 r.id = std::move(id);
                 r.text = std::move(text);
                 r.lat = lat;
                 r.lon = lon;
                 r.user_id = std::move(user_id);
                 r.created_at = created_at;
                 return r;
             }),
             "id"_a, "text"_a, "lat"_a, "lon"_a, "user_id"_a = py::none(),
             "created_at"_a = py::none())
        .def_readwrite("id", &TweetRecord::id)
        .def_readwrite("text", &TweetRecord::text)
        .def_readwrite("lat", &TweetRecord::lat)
        .def_readwrite("lon", &TweetRecord::lon)
        .def_readwrite("user_id", &TweetRecord::user_id)
        .def_readwrite("created_at", &TweetRecord::created_at)
        .def("__eq__", [](const TweetRecord& a, const TweetRecord& b) { return a == b; })
        .def("__repr__", [](const TweetRecord& r) {
            return "TweetRecord(id='" + r.id + "', lat=" + format_double(r.lat) +
                   ", lon=" + format_double(r.lon) + ")";
        });

    py::enum_<Relevance>(m, "Relevance")
        .value("Relevant", Relevance::Relevant)
        .value("Irrelevant", Relevance::Irrelevant);

    py::class_<PlanarPoint>(m, "PlanarPoint")
        .def(py::init<>())
        .def(py::init([](double x, double y, std::int32_t source_index) {
                 return PlanarPoint{x, y, source_index};
             }),
             "x"_a, "y"_a, "source_index"_a = -1)
        .def_readwrite("x", &PlanarPoint::x)
        .def_readwrite("y", &PlanarPoint::y)
        .def_readwrite("source_index", &PlanarPoint::source_index)
        .def("__repr__", [](const PlanarPoint& p) {
            return "PlanarPoint(x=" + format_double(p.x) + ", y=" + format_double(p.y) +
                   ", source_index=" + std::to_string(p.source_index) + ")";
        });

    py::class_<Projection>(m, "Projection")
        .def_static("at", &Projection::at, "origin_lat"_a, "origin_lon"_a)
        .def_readonly("origin_lat", &Projection::origin_lat)
        .def_readonly("origin_lon", &Projection::origin_lon)
        .def_readonly("meters_per_deg_lat", &Projection::meters_per_deg_lat)
        .def_readonly("meters_per_deg_lon", &Projection::meters_per_deg_lon);

    m.def(
        "project",
        [](double lat, double lon, const Projection& proj, std::int32_t source_index) {
            return project(lat, lon, proj, source_index);
        },
        "lat"_a, "lon"_a, "proj"_a, "source_index"_a = -1);
    m.def("unproject", &unproject, "x"_a, "y"_a, "proj"_a);

    py::class_<LabeledDataset>(m, "LabeledDataset")
        .def(py::init<>())
        .def_readwrite("relevant", &LabeledDataset::relevant)
        .def_readwrite("irrelevant", &LabeledDataset::irrelevant)
        .def_readwrite("origin_lat", &LabeledDataset::origin_lat)
        .def_readwrite("origin_lon", &LabeledDataset::origin_lon)
        .def("n", &LabeledDataset::n)
        .def("m", &LabeledDataset::m)
        .def("__repr__", [](const LabeledDataset& ds) {
            return "LabeledDataset(n=" + std::to_string(ds.n()) +
                   ", m=" + std::to_string(ds.m()) + ")";
        });

    m.def("validate_record", &validate_record, "record"_a);
    m.def("is_valid_utf8", &is_valid_utf8, "text"_a);

    // ---- ingest ----------------------------------------------------------------

    py::enum_<RecordFormat>(m, "RecordFormat")
        .value("Csv", RecordFormat::Csv)
        .value("Jsonl", RecordFormat::Jsonl);

    m.def(
        "parse_records_text",
        [](const std::string& text, RecordFormat format) {
            std::istringstream in(text);
            return parse_records(in, format);
        },
        "text"_a, "format"_a = RecordFormat::Csv);
    m.def("parse_records_file", &parse_records_file, "path"_a,
          "format"_a = std::optional<RecordFormat>{});
    m.def("matches_any", &matches_any, "text"_a, "queries"_a, "case_sensitive"_a = true);
    m.def("classify", &classify, "record"_a, "queries"_a, "case_sensitive"_a = true);
    m.def("classify_all", &classify_all, "records"_a, "queries"_a, "case_sensitive"_a = true);
    m.def(
        "filter_consecutive_posts",
        [](const std::vector<TweetRecord>& records, int limit) {
            bool warned = false;
            auto kept = filter_consecutive_posts(records, limit, &warned);
            return py::make_tuple(std::move(kept), warned);
        },
        "records"_a, "limit"_a = 3,
        "Returns (kept_records, warned); warned means no record had both "
        "user_id and created_at.");

    m.def("parse_iso8601_utc", &parse_iso8601_utc, "text"_a);
    m.def("format_iso8601_utc", &format_iso8601_utc, "epoch_seconds"_a);

    py::class_<PoiSpec>(m, "PoiSpec")
        .def(py::init<>())
        .def(py::init([](std::string name, double center_lat, double center_lon,
                         std::vector<std::string> queries) {
                 PoiSpec p;
                 p.name = std::move(name);
                 p.center_lat = center_lat;
                 p.center_lon = center_lon;
                 p.queries = std::move(queries);
                 return p;
             }),
             "name"_a, "center_lat"_a, "center_lon"_a, "queries"_a)
        .def_readwrite("name", &PoiSpec::name)
        .def_readwrite("center_lat", &PoiSpec::center_lat)
        .def_readwrite("center_lon", &PoiSpec::center_lon)
        .def_readwrite("queries", &PoiSpec::queries);

    py::class_<QueryRegion>(m, "QueryRegion")
        .def(py::init<>())
        .def_readwrite("center_lat", &QueryRegion::center_lat)
        .def_readwrite("center_lon", &QueryRegion::center_lon)
        .def_readwrite("center_x", &QueryRegion::center_x)
        .def_readwrite("center_y", &QueryRegion::center_y)
        .def_readwrite("radius", &QueryRegion::radius)
        .def_readwrite("precision_at_radius", &QueryRegion::precision_at_radius)
        .def_readwrite("meets_threshold", &QueryRegion::meets_threshold)
        .def("__repr__", [](const QueryRegion& r) {
            return "QueryRegion(radius=" + format_double(r.radius) +
                   ", precision=" + format_double(r.precision_at_radius) + ")";
        });

    py::class_<AssembleOptions>(m, "AssembleOptions")
        .def(py::init<>())
        .def_readwrite("eta", &AssembleOptions::eta)
        .def_readwrite("r0", &AssembleOptions::r0)
        .def_readwrite("step", &AssembleOptions::step)
        .def_readwrite("case_sensitive", &AssembleOptions::case_sensitive)
        .def_readwrite("projection_origin", &AssembleOptions::projection_origin);

    py::class_<AssembledData>(m, "AssembledData")
        .def_readonly("dataset", &AssembledData::dataset)
        .def_readonly("region", &AssembledData::region)
        .def_readonly("relevance", &AssembledData::relevance);

    m.def("build_query_region", &build_query_region, "points"_a, "relevance"_a, "poi"_a,
          "proj"_a, "options"_a = AssembleOptions{});
    m.def("assemble_dataset", &assemble_dataset, "records"_a, "poi"_a,
          "options"_a = AssembleOptions{});

    // ---- spatial index -----------------------------------------------------------

    py::enum_<BackendKind>(m, "BackendKind")
        .value("KdTree", BackendKind::KdTree)
        .value("LinearScan", BackendKind::LinearScan);

    py::class_<RangeQueryBackend>(m, "RangeQueryBackend")
        .def(py::init<const LabeledDataset&, BackendKind>(), "dataset"_a,
             "kind"_a = BackendKind::KdTree)
        .def(
            "range_query",
            [](const RangeQueryBackend& be, const PlanarPoint& p, double epsilon) {
                return be.range_query(p, epsilon);
            },
            "point"_a, "epsilon"_a,
            "Returns (relevant_indices, irrelevant_indices), both sorted.")
        .def("kind", &RangeQueryBackend::kind)
        .def("n", &RangeQueryBackend::n)
        .def("m", &RangeQueryBackend::m)
        .def("tree_depth", &RangeQueryBackend::tree_depth)
        .def("query_count", &RangeQueryBackend::query_count)
        .def("reset_query_count", &RangeQueryBackend::reset_query_count);

    // ---- clustering ---------------------------------------------------------------

    py::class_<ClusterParams>(m, "ClusterParams")
        .def(py::init<>())
        .def(py::init([](double epsilon, int n_min, int n_max) {
                 return ClusterParams{epsilon, n_min, n_max};
             }),
             "epsilon"_a, "n_min"_a = 1, "n_max"_a = 0)
        .def_readwrite("epsilon", &ClusterParams::epsilon)
        .def_readwrite("n_min", &ClusterParams::n_min)
        .def_readwrite("n_max", &ClusterParams::n_max);

    py::class_<FuzzyParams>(m, "FuzzyParams")
        .def(py::init<>())
        .def(py::init([](double epsilon, int n_min1, int n_min2, int n_max1, int n_max2) {
                 return FuzzyParams{epsilon, n_min1, n_min2, n_max1, n_max2};
             }),
             "epsilon"_a, "n_min1"_a, "n_min2"_a, "n_max1"_a, "n_max2"_a)
        .def_readwrite("epsilon", &FuzzyParams::epsilon)
        .def_readwrite("n_min1", &FuzzyParams::n_min1)
        .def_readwrite("n_min2", &FuzzyParams::n_min2)
        .def_readwrite("n_max1", &FuzzyParams::n_max1)
        .def_readwrite("n_max2", &FuzzyParams::n_max2);

    m.def("validate_cluster_params",
          py::overload_cast<const ClusterParams&>(&validate_params), "params"_a);
    m.def("validate_fuzzy_params", py::overload_cast<const FuzzyParams&>(&validate_params),
          "params"_a);

    m.attr("NOISE_LABEL") = kNoiseLabel;

    py::class_<ClusteringResult>(m, "ClusteringResult")
        .def(py::init<>())
        .def_readwrite("labels", &ClusteringResult::labels)
        .def_readwrite("core_flags", &ClusteringResult::core_flags)
        .def_readwrite("fuzzy_scores", &ClusteringResult::fuzzy_scores)
        .def_readwrite("num_clusters", &ClusteringResult::num_clusters)
        .def("__repr__", [](const ClusteringResult& r) {
            return "ClusteringResult(num_clusters=" + std::to_string(r.num_clusters) +
                   ", points=" + std::to_string(r.labels.size()) + ")";
        });

    m.def("is_core", &is_core, "dataset"_a, "backend"_a, "x_index"_a, "params"_a);
    m.def("dbstexc", &dbstexc, "dataset"_a, "backend"_a, "params"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def("f_dbstexc", &f_dbstexc, "dataset"_a, "backend"_a, "params"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def("dbscan", &dbscan, "dataset"_a, "backend"_a, "epsilon"_a, "n_min"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def("j_re", &j_re, "x_count"_a, "params"_a);
    m.def("j_irre", &j_irre, "y_count"_a, "params"_a);
    m.def("fuzzy_score", &fuzzy_score, "x_count"_a, "y_count"_a, "params"_a);
    m.def("knn_distance_profile", &knn_distance_profile, "points"_a, "k"_a,
          py::call_guard<py::gil_scoped_release>());

    // ---- evaluation -----------------------------------------------------------------

    py::class_<Confusion>(m, "Confusion")
        .def(py::init<>())
        .def_readwrite("tp", &Confusion::tp)
        .def_readwrite("fp", &Confusion::fp)
        .def_readwrite("fn", &Confusion::fn)
        .def("__repr__", [](const Confusion& c) {
            return "Confusion(tp=" + std::to_string(c.tp) + ", fp=" + std::to_string(c.fp) +
                   ", fn=" + std::to_string(c.fn) + ")";
        });

    py::class_<EvalOptions>(m, "EvalOptions")
        .def(py::init<>())
        .def_readwrite("mu_threshold", &EvalOptions::mu_threshold)
        .def_readwrite("area_cell", &EvalOptions::area_cell);

    m.def("confusion", &confusion, "result"_a, "dataset"_a, "mu_threshold"_a = 0.0);
    m.def("precision_of", &precision_of, "confusion"_a);
    m.def("recall_of", &recall_of, "confusion"_a);
    m.def("f1_of", &f1_of, "confusion"_a);
    m.def("metric_score", &metric_score, "area_norm"_a, "f1"_a, "alpha"_a);
    m.def("cluster_area", &cluster_area, "result"_a, "dataset"_a, "region"_a, "epsilon"_a,
          "options"_a = EvalOptions{}, py::call_guard<py::gil_scoped_release>());

    py::class_<EvalReport>(m, "EvalReport")
        .def(py::init<>())
        .def_readwrite("tp", &EvalReport::tp)
        .def_readwrite("fp", &EvalReport::fp)
        .def_readwrite("fn", &EvalReport::fn)
        .def_readwrite("precision", &EvalReport::precision)
        .def_readwrite("recall", &EvalReport::recall)
        .def_readwrite("f1", &EvalReport::f1)
        .def_readwrite("area_m2", &EvalReport::area_m2)
        .def_readwrite("area_norm", &EvalReport::area_norm)
        .def_readwrite("alpha", &EvalReport::alpha)
        .def_readwrite("score", &EvalReport::score)
        .def("__repr__", [](const EvalReport& r) {
            return "EvalReport(f1=" + format_double(r.f1) +
                   ", area_m2=" + format_double(r.area_m2) +
                   ", alpha=" + format_double(r.alpha) +
                   ", score=" + format_double(r.score) + ")";
        });

    m.def("score", &score, "result"_a, "dataset"_a, "region"_a, "alpha"_a, "epsilon"_a,
          "options"_a = EvalOptions{}, py::call_guard<py::gil_scoped_release>());

    py::enum_<Algorithm>(m, "Algorithm")
        .value("Dbscan", Algorithm::Dbscan)
        .value("Dbstexc", Algorithm::Dbstexc)
        .value("FDbstexc", Algorithm::FDbstexc);

    m.def("algorithm_name", &algorithm_name, "algorithm"_a);

    py::class_<FuzzyQuad>(m, "FuzzyQuad")
        .def(py::init<>())
        .def(py::init([](int n_min1, int n_min2, int n_max1, int n_max2) {
                 return FuzzyQuad{n_min1, n_min2, n_max1, n_max2};
             }),
             "n_min1"_a, "n_min2"_a, "n_max1"_a, "n_max2"_a)
        .def_readwrite("n_min1", &FuzzyQuad::n_min1)
        .def_readwrite("n_min2", &FuzzyQuad::n_min2)
        .def_readwrite("n_max1", &FuzzyQuad::n_max1)
        .def_readwrite("n_max2", &FuzzyQuad::n_max2);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("epsilons", &SweepSpec::epsilons)
        .def_readwrite("n_mins", &SweepSpec::n_mins)
        .def_readwrite("n_maxs", &SweepSpec::n_maxs)
        .def_readwrite("quads", &SweepSpec::quads)
        .def_readwrite("alphas", &SweepSpec::alphas)
        .def_readwrite("options", &SweepSpec::options);

    py::class_<SweepRow>(m, "SweepRow")
        .def(py::init<>())
        .def_readwrite("algorithm", &SweepRow::algorithm)
        .def_readwrite("epsilon", &SweepRow::epsilon)
        .def_readwrite("n_min", &SweepRow::n_min)
        .def_readwrite("n_max", &SweepRow::n_max)
        .def_readwrite("quad", &SweepRow::quad)
        .def_readwrite("report", &SweepRow::report);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("rows", &SweepResult::rows)
        .def_readonly("best", &SweepResult::best);

    m.def("sweep", &sweep, "dataset"_a, "backend"_a, "region"_a, "algorithm"_a, "spec"_a,
          py::call_guard<py::gil_scoped_release>());

    // ---- synthetic data and benchmarks ------------------------------------------------

    py::class_<Blob>(m, "Blob")
        .def(py::init<>())
        .def(py::init([](double cx, double cy, double sigma, int count) {
                 return Blob{cx, cy, sigma, count};
             }),
             "cx"_a, "cy"_a, "sigma"_a, "count"_a)
        .def_readwrite("cx", &Blob::cx)
        .def_readwrite("cy", &Blob::cy)
        .def_readwrite("sigma", &Blob::sigma)
        .def_readwrite("count", &Blob::count);

    py::class_<GenSpec>(m, "GenSpec")
        .def(py::init<>())
        .def_readwrite("seed", &GenSpec::seed)
        .def_readwrite("region_radius", &GenSpec::region_radius)
        .def_readwrite("relevant_blobs", &GenSpec::relevant_blobs)
        .def_readwrite("irrelevant_blobs", &GenSpec::irrelevant_blobs)
        .def_readwrite("uniform_relevant", &GenSpec::uniform_relevant)
        .def_readwrite("uniform_irrelevant", &GenSpec::uniform_irrelevant);

    m.def("generate", &generate, "spec"_a, py::call_guard<py::gil_scoped_release>());

    py::class_<OracleResult>(m, "OracleResult")
        .def_readonly("core_flags", &OracleResult::core_flags)
        .def_readonly("core_component", &OracleResult::core_component)
        .def_readonly("num_components", &OracleResult::num_components);

    m.def("oracle_cluster", &oracle_cluster, "dataset"_a, "params"_a,
          py::call_guard<py::gil_scoped_release>());

    py::enum_<BenchRegime>(m, "BenchRegime")
        .value("LinearM", BenchRegime::LinearM)
        .value("PowerM", BenchRegime::PowerM);

    py::class_<BenchSize>(m, "BenchSize")
        .def(py::init<>())
        .def(py::init([](int n, int m_, BenchRegime regime) {
                 return BenchSize{n, m_, regime};
             }),
             "n"_a, "m"_a, "regime"_a = BenchRegime::LinearM)
        .def_readwrite("n", &BenchSize::n)
        .def_readwrite("m", &BenchSize::m)
        .def_readwrite("regime", &BenchSize::regime);

    py::class_<BenchRow>(m, "BenchRow")
        .def_readonly("n", &BenchRow::n)
        .def_readonly("m", &BenchRow::m)
        .def_readonly("median_seconds", &BenchRow::median_seconds)
        .def_readonly("regime", &BenchRow::regime)
        .def_readonly("backend", &BenchRow::backend);

    py::class_<BenchReport>(m, "BenchReport")
        .def_readonly("rows", &BenchReport::rows)
        .def_readonly("slope_linear_m", &BenchReport::slope_linear_m)
        .def_readonly("slope_power_m", &BenchReport::slope_power_m)
        .def_readonly("split_n", &BenchReport::split_n);

    m.def("default_bench_sizes", &default_bench_sizes);
    m.def("run_bench", &run_bench, "sizes"_a, "trials"_a = 3,
          "backend"_a = BackendKind::LinearScan, "seed"_a = 2024,
          py::call_guard<py::gil_scoped_release>());
    m.def("fit_loglog_slope", &fit_loglog_slope, "n_and_seconds"_a);
}
