#include "stclust/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "json.hpp"
#include "stclust/errors.hpp"
#include "stclust/geo.hpp"
#include "stclust/timeparse.hpp"

namespace stclust {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Quote per RFC 4180 only when the field needs it.
std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::vector<std::vector<PlanarPoint>> cluster_members(const LabeledDataset& ds,
                                                      const ClusteringResult& result) {
    std::vector<std::vector<PlanarPoint>> members(result.num_clusters);
    const std::size_t n = ds.relevant.size();
    for (std::size_t i = 0; i < result.labels.size(); ++i) {
        if (result.labels[i] == kNoiseLabel) continue;
        members[result.labels[i] - 1].push_back(i < n ? ds.relevant[i]
                                                      : ds.irrelevant[i - n]);
    }
    return members;
}

Polygon hull_or_disk_ring(const std::vector<PlanarPoint>& pts, double epsilon) {
    Polygon hull = convex_hull(pts);
    if (hull.size() >= 3) return hull;
    double cx = 0, cy = 0;
    for (const auto& p : pts) {
        cx += p.x;
        cy += p.y;
    }
    cx /= static_cast<double>(pts.size());
    cy /= static_cast<double>(pts.size());
    Polygon ring;
    for (int i = 0; i < 32; ++i) {
        const double a = 2.0 * kPi * i / 32.0;
        ring.push_back({cx + epsilon * std::cos(a), cy + epsilon * std::sin(a), -1});
    }
    return ring;
}
}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw Error("format_double failed");
    return std::string(buf, ptr);
}

const char* algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Dbscan: return "dbscan";
        case Algorithm::Dbstexc: return "dbstexc";
        case Algorithm::FDbstexc: return "f_dbstexc";
    }
    return "?";
}

void write_records_csv(std::ostream& out, const std::vector<TweetRecord>& records) {
    out << "id,text,lat,lon,user_id,created_at\n";
    for (const auto& r : records) {
        out << csv_escape(r.id) << ',' << csv_escape(r.text) << ',' << format_double(r.lat)
            << ',' << format_double(r.lon) << ',' << csv_escape(r.user_id.value_or("")) << ',';
        if (r.created_at) out << format_iso8601_utc(*r.created_at);
        out << '\n';
    }
}

void write_records_jsonl(std::ostream& out, const std::vector<TweetRecord>& records) {
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["id"] = r.id;
        j["text"] = r.text;
        j["lat"] = r.lat;
        j["lon"] = r.lon;
        if (r.user_id) j["user_id"] = *r.user_id;
        if (r.created_at) j["created_at"] = format_iso8601_utc(*r.created_at);
        out << j.dump() << '\n';
    }
}

void write_labels_csv(std::ostream& out, const std::vector<TweetRecord>& records,
                      const LabeledDataset& dataset, const ClusteringResult& result) {
    struct Row {
        std::int32_t source;
        bool relevant;
        std::int32_t label;
        bool core;
        double mu;
    };
    std::vector<Row> rows;
    rows.reserve(result.labels.size());
    const std::size_t n = dataset.relevant.size();
    for (std::size_t i = 0; i < dataset.relevant.size(); ++i)
        rows.push_back({dataset.relevant[i].source_index, true, result.labels[i],
                        static_cast<bool>(result.core_flags[i]),
                        result.fuzzy_scores ? (*result.fuzzy_scores)[i] : 0.0});
    for (std::size_t j = 0; j < dataset.irrelevant.size(); ++j)
        rows.push_back({dataset.irrelevant[j].source_index, false, result.labels[n + j], false,
                        result.fuzzy_scores ? (*result.fuzzy_scores)[n + j] : 0.0});
    std::sort(rows.begin(), rows.end(),
              [](const Row& a, const Row& b) { return a.source < b.source; });

    out << "id,relevance,cluster,core,mu\n";
    for (const Row& row : rows) {
        const std::string& id = records.at(static_cast<std::size_t>(row.source)).id;
        out << csv_escape(id) << ',' << (row.relevant ? "relevant" : "irrelevant") << ',';
        if (row.label == kNoiseLabel)
            out << "noise";
        else
            out << row.label;
        out << ',' << (row.core ? '1' : '0') << ',';
        if (result.fuzzy_scores) out << format_double(row.mu);
        out << '\n';
    }
}

void write_rows_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "algorithm,epsilon,n_min,n_max,n_min1,n_min2,n_max1,n_max2,alpha,"
           "tp,fp,fn,precision,recall,f1,area_m2,area_norm,score\n";
    auto opt_int = [](int v) { return v >= 0 ? std::to_string(v) : std::string(); };
    for (const SweepRow& row : rows) {
        out << algorithm_name(row.algorithm) << ',' << format_double(row.epsilon) << ','
            << opt_int(row.n_min) << ',' << opt_int(row.n_max) << ','
            << opt_int(row.quad.n_min1) << ',' << opt_int(row.quad.n_min2) << ','
            << opt_int(row.quad.n_max1) << ',' << opt_int(row.quad.n_max2) << ','
            << format_double(row.report.alpha) << ',' << row.report.tp << ',' << row.report.fp
            << ',' << row.report.fn << ',' << format_double(row.report.precision) << ','
            << format_double(row.report.recall) << ',' << format_double(row.report.f1) << ','
            << format_double(row.report.area_m2) << ',' << format_double(row.report.area_norm)
            << ',' << format_double(row.report.score) << '\n';
    }
}

void write_clusters_geojson(std::ostream& out, const LabeledDataset& dataset,
                            const ClusteringResult& result, double epsilon) {
    const Projection proj = Projection::at(dataset.origin_lat, dataset.origin_lon);
    const auto members = cluster_members(dataset, result);
    const std::size_t n = dataset.relevant.size();

    nlohmann::ordered_json fc;
    fc["type"] = "FeatureCollection";
    fc["features"] = nlohmann::ordered_json::array();
    for (std::int32_t c = 0; c < result.num_clusters; ++c) {
        const auto& pts = members[c];
        if (pts.empty()) continue;
        const Polygon ring = hull_or_disk_ring(pts, epsilon);

        nlohmann::ordered_json coords = nlohmann::ordered_json::array();
        auto push_vertex = [&](const PlanarPoint& p) {
            const auto [lat, lon] = unproject(p.x, p.y, proj);
            coords.push_back({lon, lat});
        };
        for (const auto& v : ring) push_vertex(v);
        push_vertex(ring.front());  // close the ring

        int core_count = 0;
        double mu_sum = 0.0;
        std::size_t mu_count = 0;
        for (std::size_t i = 0; i < result.labels.size(); ++i) {
            if (result.labels[i] != c + 1) continue;
            if (i < n && result.core_flags[i]) ++core_count;
            if (result.fuzzy_scores) {
                mu_sum += (*result.fuzzy_scores)[i];
                ++mu_count;
            }
        }

        nlohmann::ordered_json feature;
        feature["type"] = "Feature";
        feature["geometry"] = {{"type", "Polygon"},
                               {"coordinates", nlohmann::ordered_json::array({coords})}};
        feature["properties"]["cluster"] = c + 1;
        feature["properties"]["member_count"] = pts.size();
        feature["properties"]["core_count"] = core_count;
        if (mu_count > 0)
            feature["properties"]["mean_mu"] = mu_sum / static_cast<double>(mu_count);
        else
            feature["properties"]["mean_mu"] = nullptr;
        fc["features"].push_back(std::move(feature));
    }
    out << fc.dump(2) << '\n';
}

void write_map_svg(std::ostream& out, const LabeledDataset& dataset,
                   const ClusteringResult& result, const QueryRegion& region) {
    static const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                     "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
    const double r = region.radius;
    const double x0 = region.center_x - r, y0 = region.center_y - r;
    const double side = 2.0 * r;
    const double scale = 760.0 / side;
    auto sx = [&](double x) { return 20.0 + (x - x0) * scale; };
    auto sy = [&](double y) { return 20.0 + (y0 + side - y) * scale; };  // flip north up

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    out << "<circle cx=\"" << format_double(sx(region.center_x)) << "\" cy=\""
        << format_double(sy(region.center_y)) << "\" r=\"" << format_double(r * scale)
        << "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";

    const auto members = cluster_members(dataset, result);
    for (std::int32_t c = 0; c < result.num_clusters; ++c) {
        if (members[c].empty()) continue;
        const Polygon hull = convex_hull(members[c]);
        if (hull.size() < 3) continue;
        out << "<polygon points=\"";
        for (const auto& v : hull)
            out << format_double(sx(v.x)) << ',' << format_double(sy(v.y)) << ' ';
        out << "\" fill=\"none\" stroke=\"" << kPalette[c % 10] << "\" stroke-width=\"1.5\"/>\n";
    }

    const std::size_t n = dataset.relevant.size();
    auto draw_point = [&](const PlanarPoint& p, std::size_t label_idx, bool relevant) {
        const std::int32_t label = result.labels[label_idx];
        const char* color = label == kNoiseLabel ? (relevant ? "#333" : "#ccc")
                                                 : kPalette[(label - 1) % 10];
        out << "<circle cx=\"" << format_double(sx(p.x)) << "\" cy=\""
            << format_double(sy(p.y)) << "\" r=\"" << (relevant ? "2.4" : "1.6")
            << "\" fill=\"" << color << "\"" << (relevant ? "" : " opacity=\"0.55\"")
            << "/>\n";
    };
    for (std::size_t j = 0; j < dataset.irrelevant.size(); ++j)
        draw_point(dataset.irrelevant[j], n + j, false);
    for (std::size_t i = 0; i < n; ++i) draw_point(dataset.relevant[i], i, true);
    out << "</svg>\n";
}

void write_knn_csv(std::ostream& out, const std::vector<double>& profile) {
    out << "rank,distance\n";
    for (std::size_t i = 0; i < profile.size(); ++i)
        out << (i + 1) << ',' << format_double(profile[i]) << '\n';
}

void write_knn_svg(std::ostream& out, const std::vector<double>& profile, int k) {
    const double w = 800, h = 500, ml = 60, mb = 40, mt = 20, mr = 20;
    const double dmax = profile.empty() ? 1.0 : std::max(profile.back(), 1e-9);
    const auto count = static_cast<double>(std::max<std::size_t>(profile.size(), 1));
    auto px = [&](std::size_t i) {
        return ml + (w - ml - mr) * static_cast<double>(i) / std::max(count - 1, 1.0);
    };
    auto py = [&](double d) { return h - mb - (h - mb - mt) * d / dmax; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
           "viewBox=\"0 0 800 500\">\n<rect width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << (h - mb) << "\" x2=\"" << (w - mr)
        << "\" y2=\"" << (h - mb) << "\" stroke=\"#333\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << (h - mb) << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << (w / 2) << "\" y=\"" << (h - 8)
        << "\" font-size=\"13\" text-anchor=\"middle\">points sorted by distance to "
        << k << "-th nearest neighbor</text>\n";
    out << "<text x=\"14\" y=\"" << (h / 2)
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << (h / 2) << ")\">distance (m)</text>\n";
    if (!profile.empty()) {
        out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < profile.size(); ++i)
            out << format_double(px(i)) << ',' << format_double(py(profile[i])) << ' ';
        out << "\"/>\n";
    }
    out << "<text x=\"" << (ml - 8) << "\" y=\"" << (py(dmax) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << format_double(dmax) << "</text>\n";
    out << "<text x=\"" << (ml - 8) << "\" y=\"" << (h - mb + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">0</text>\n";
    out << "</svg>\n";
}

void write_bench_csv(std::ostream& out, const BenchReport& report) {
    out << "n,m,median_seconds,backend\n";
    for (const BenchRow& row : report.rows)
        out << row.n << ',' << row.m << ',' << format_double(row.median_seconds) << ','
            << (row.backend == BackendKind::LinearScan ? "linear" : "kdtree") << '\n';
}

std::string bench_summary_json(const BenchReport& report) {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const BenchRow& row : report.rows)
        j["rows"].push_back(
            {{"n", row.n},
             {"m", row.m},
             {"median_seconds", row.median_seconds},
             {"regime", row.regime == BenchRegime::LinearM ? "m_linear_in_n" : "m_power_of_n"},
             {"backend", row.backend == BackendKind::LinearScan ? "linear" : "kdtree"}});
    j["slope_m_linear_in_n"] =
        report.slope_linear_m ? nlohmann::ordered_json(*report.slope_linear_m) : nullptr;
    j["slope_m_power_of_n"] =
        report.slope_power_m ? nlohmann::ordered_json(*report.slope_power_m) : nullptr;
    j["split_n"] = report.split_n ? nlohmann::ordered_json(*report.split_n) : nullptr;
    return j.dump(2);
}

}  // namespace stclust
