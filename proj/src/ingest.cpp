#include "stclust/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <unordered_map>

#include "json.hpp"
#include "stclust/errors.hpp"
#include "stclust/timeparse.hpp"

namespace stclust {

namespace {

struct RawRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;  // 1-based line the record starts on
};

// RFC-4180 reader: quoted fields may contain commas, quotes ("" escapes) and
// line breaks. Records are separated by LF or CRLF outside quotes.
std::vector<RawRecord> read_csv(std::istream& in) {
    std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (data.size() >= 3 && data.compare(0, 3, "\xEF\xBB\xBF") == 0) data.erase(0, 3);

    std::vector<RawRecord> records;
    RawRecord rec;
    std::string field;
    bool in_quotes = false, field_started = false, record_started = false;
    std::size_t line = 1, rec_line = 1;

    auto end_field = [&] {
        rec.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        if (!(rec.fields.size() == 1 && rec.fields[0].empty()))  // skip blank lines
            records.push_back(std::move(rec));
        rec = RawRecord{};
        record_started = false;
    };

    for (std::size_t i = 0; i < data.size(); ++i) {
        const char c = data[i];
        if (!record_started) {
            record_started = true;
            rec_line = line;
            rec.line = rec_line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < data.size() && data[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field_started && field.empty()) {
                    in_quotes = true;
                    field_started = true;
                } else {
                    field += c;  // stray quote mid-field: keep it, be lenient
                }
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < data.size() && data[i + 1] == '\n') break;  // handled by \n
                field += c;
                break;
            case '\n':
                ++line;
                end_record();
                break;
            default:
                field_started = true;
                field += c;
        }
    }
    if (in_quotes) throw ParseError(rec_line, "unterminated quoted field");
    if (record_started || field_started || !field.empty() || !rec.fields.empty()) end_record();
    return records;
}

double parse_double_field(const std::string& s, const char* what, std::size_t line) {
    double value = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError(line, std::string(what) + " is not a number: '" + s + "'");
    return value;
}

std::vector<TweetRecord> parse_csv_records(std::istream& in) {
    const std::vector<RawRecord> raw = read_csv(in);
    if (raw.empty()) return {};

    const auto& header = raw.front().fields;
    std::unordered_map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col.emplace(header[i], i);
    for (const char* required : {"id", "text", "lat", "lon"})
        if (!col.count(required))
            throw ParseError(raw.front().line,
                             std::string("missing required column '") + required + "'");

    std::vector<TweetRecord> out;
    out.reserve(raw.size() - 1);
    for (std::size_t r = 1; r < raw.size(); ++r) {
        const auto& row = raw[r];
        if (row.fields.size() != header.size())
            throw ParseError(row.line, "expected " + std::to_string(header.size()) +
                                           " fields, got " + std::to_string(row.fields.size()));
        TweetRecord rec;
        rec.id = row.fields[col["id"]];
        rec.text = row.fields[col["text"]];
        rec.lat = parse_double_field(row.fields[col["lat"]], "lat", row.line);
        rec.lon = parse_double_field(row.fields[col["lon"]], "lon", row.line);
        if (auto it = col.find("user_id"); it != col.end() && !row.fields[it->second].empty())
            rec.user_id = row.fields[it->second];
        if (auto it = col.find("created_at"); it != col.end() && !row.fields[it->second].empty()) {
            const std::string& ts = row.fields[it->second];
            auto epoch = parse_iso8601_utc(ts);
            if (!epoch) throw ParseError(row.line, "bad created_at timestamp: '" + ts + "'");
            rec.created_at = *epoch;
        }
        validate_record(rec);
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<TweetRecord> parse_jsonl_records(std::istream& in) {
    std::vector<TweetRecord> out;
    std::string line_text;
    std::size_t line_no = 0;
    while (std::getline(in, line_text)) {
        ++line_no;
        if (!line_text.empty() && line_text.back() == '\r') line_text.pop_back();
        if (line_text.find_first_not_of(" \t") == std::string::npos) continue;

        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line_text);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        if (!j.is_object()) throw ParseError(line_no, "expected a JSON object");

        TweetRecord rec;
        if (!j.contains("id") || !j.contains("text") || !j.contains("lat") || !j.contains("lon"))
            throw ParseError(line_no, "record needs id, text, lat and lon");
        const auto& id = j["id"];
        if (id.is_string())
            rec.id = id.get<std::string>();
        else if (id.is_number_integer())
            rec.id = std::to_string(id.get<std::int64_t>());
        else
            throw ParseError(line_no, "id must be a string or integer");
        if (!j["text"].is_string()) throw ParseError(line_no, "text must be a string");
        rec.text = j["text"].get<std::string>();
        if (!j["lat"].is_number() || !j["lon"].is_number())
            throw ParseError(line_no, "lat/lon must be numbers");
        rec.lat = j["lat"].get<double>();
        rec.lon = j["lon"].get<double>();
        if (j.contains("user_id") && !j["user_id"].is_null()) {
            if (!j["user_id"].is_string()) throw ParseError(line_no, "user_id must be a string");
            rec.user_id = j["user_id"].get<std::string>();
        }
        if (j.contains("created_at") && !j["created_at"].is_null()) {
            if (!j["created_at"].is_string())
                throw ParseError(line_no, "created_at must be an ISO-8601 string");
            auto epoch = parse_iso8601_utc(j["created_at"].get<std::string>());
            if (!epoch)
                throw ParseError(line_no, "bad created_at timestamp: '" +
                                              j["created_at"].get<std::string>() + "'");
            rec.created_at = *epoch;
        }
        validate_record(rec);
        out.push_back(std::move(rec));
    }
    return out;
}

std::string fold_ascii(const std::string& s) {
    std::string lowered = s;
    for (char& c : lowered)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return lowered;
}

}  // namespace

std::vector<TweetRecord> parse_records(std::istream& in, RecordFormat format) {
    return format == RecordFormat::Csv ? parse_csv_records(in) : parse_jsonl_records(in);
}

std::vector<TweetRecord> parse_records_file(const std::string& path,
                                            std::optional<RecordFormat> format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open input file: " + path);
    RecordFormat fmt;
    if (format) {
        fmt = *format;
    } else {
        const auto dot = path.rfind('.');
        const std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
        fmt = (ext == "jsonl" || ext == "ndjson" || ext == "json") ? RecordFormat::Jsonl
                                                                   : RecordFormat::Csv;
    }
    return parse_records(in, fmt);
}

bool matches_any(const std::string& text, const std::vector<std::string>& queries,
                 bool case_sensitive) {
    if (queries.empty()) throw Error("relevance queries must not be empty");
    for (const auto& q : queries)
        if (q.empty()) throw Error("relevance query strings must not be empty");
    if (case_sensitive) {
        for (const auto& q : queries)
            if (text.find(q) != std::string::npos) return true;
        return false;
    }
    const std::string folded = fold_ascii(text);
    for (const auto& q : queries)
        if (folded.find(fold_ascii(q)) != std::string::npos) return true;
    return false;
}

Relevance classify(const TweetRecord& record, const std::vector<std::string>& queries,
                   bool case_sensitive) {
    return matches_any(record.text, queries, case_sensitive) ? Relevance::Relevant
                                                             : Relevance::Irrelevant;
}

std::vector<Relevance> classify_all(const std::vector<TweetRecord>& records,
                                    const std::vector<std::string>& queries,
                                    bool case_sensitive) {
    std::vector<Relevance> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(classify(r, queries, case_sensitive));
    return out;
}

std::vector<TweetRecord> filter_consecutive_posts(const std::vector<TweetRecord>& records,
                                                  int limit, bool* warned) {
    if (limit < 1) throw Error("filter_consecutive_posts: limit must be >= 1");
    if (warned) *warned = false;

    std::map<std::string, std::vector<std::size_t>> by_user;
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].user_id && records[i].created_at)
            by_user[*records[i].user_id].push_back(i);

    if (by_user.empty()) {
        if (warned && !records.empty()) *warned = true;
        return records;
    }

    std::vector<char> drop(records.size(), 0);
    for (auto& [user, idxs] : by_user) {
        std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
            if (*records[a].created_at != *records[b].created_at)
                return *records[a].created_at < *records[b].created_at;
            return a < b;
        });
        std::size_t run_start = 0;
        for (std::size_t k = 1; k <= idxs.size(); ++k) {
            const bool same_spot =
                k < idxs.size() && records[idxs[k]].lat == records[idxs[run_start]].lat &&
                records[idxs[k]].lon == records[idxs[run_start]].lon;
            if (!same_spot) {
                if (k - run_start > static_cast<std::size_t>(limit))
                    for (std::size_t r = run_start; r < k; ++r) drop[idxs[r]] = 1;
                run_start = k;
            }
        }
    }

    std::vector<TweetRecord> kept;
    kept.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        if (!drop[i]) kept.push_back(records[i]);
    return kept;
}

QueryRegion build_query_region(const std::vector<PlanarPoint>& points,
                               const std::vector<Relevance>& relevance, const PoiSpec& poi,
                               const Projection& proj, const AssembleOptions& opts) {
    if (points.size() != relevance.size())
        throw Error("build_query_region: points and relevance sizes differ");
    if (points.empty()) throw Error("build_query_region: no points");
    if (!(opts.eta > 0.0) || opts.eta > 1.0) throw Error("eta must be in (0, 1]");
    if (!(opts.r0 > 0.0) || !(opts.step > 0.0)) throw Error("r0 and step must be positive");

    const PlanarPoint center = project(poi.center_lat, poi.center_lon, proj);

    // Sort distances once; precision at a radius is then a prefix ratio.
    std::vector<std::pair<double, bool>> by_dist(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        by_dist[i] = {dist(points[i], center), relevance[i] == Relevance::Relevant};
    std::sort(by_dist.begin(), by_dist.end());
    const double cap = by_dist.back().first;

    std::vector<double> radii;
    if (cap <= opts.r0) {
        radii.push_back(opts.r0);
    } else {
        for (int i = 0;; ++i) {
            const double r = opts.r0 + static_cast<double>(i) * opts.step;
            if (r >= cap) break;
            radii.push_back(r);
        }
        radii.push_back(cap);
    }

    QueryRegion region;
    region.center_lat = poi.center_lat;
    region.center_lon = poi.center_lon;
    region.center_x = center.x;
    region.center_y = center.y;

    std::size_t cursor = 0;
    std::int64_t total = 0, rel = 0;
    double prev_radius = 0.0, prev_precision = 0.0;
    bool have_prev = false;
    for (const double r : radii) {
        while (cursor < by_dist.size() && by_dist[cursor].first <= r) {
            ++total;
            rel += by_dist[cursor].second;
            ++cursor;
        }
        const double precision =
            total == 0 ? 1.0 : static_cast<double>(rel) / static_cast<double>(total);
        if (precision < opts.eta) {
            if (!have_prev) {  // even the smallest radius is too dilute
                region.radius = opts.r0;
                region.precision_at_radius = precision;
                region.meets_threshold = false;
                return region;
            }
            region.radius = prev_radius;
            region.precision_at_radius = prev_precision;
            region.meets_threshold = true;
            return region;
        }
        prev_radius = r;
        prev_precision = precision;
        have_prev = true;
    }
    region.radius = prev_radius;
    region.precision_at_radius = prev_precision;
    region.meets_threshold = true;
    return region;
}

AssembledData assemble_dataset(const std::vector<TweetRecord>& records, const PoiSpec& poi,
                               const AssembleOptions& opts) {
    if (records.empty()) throw EmptyRelevantSet("no input records");
    for (const auto& rec : records) validate_record(rec);

    AssembledData out;
    out.relevance = classify_all(records, poi.queries, opts.case_sensitive);
    const auto n_relevant = static_cast<std::size_t>(
        std::count(out.relevance.begin(), out.relevance.end(), Relevance::Relevant));
    if (n_relevant == 0)
        throw EmptyRelevantSet("no record matches the relevance queries for '" + poi.name + "'");

    const auto [origin_lat, origin_lon] =
        opts.projection_origin.value_or(std::make_pair(poi.center_lat, poi.center_lon));
    const Projection proj = Projection::at(origin_lat, origin_lon);

    std::vector<PlanarPoint> points;
    points.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        points.push_back(
            project(records[i].lat, records[i].lon, proj, static_cast<std::int32_t>(i)));

    out.region = build_query_region(points, out.relevance, poi, proj, opts);

    out.dataset.origin_lat = origin_lat;
    out.dataset.origin_lon = origin_lon;
    const PlanarPoint center{out.region.center_x, out.region.center_y, -1};
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (dist(points[i], center) > out.region.radius) continue;
        if (out.relevance[i] == Relevance::Relevant)
            out.dataset.relevant.push_back(points[i]);
        else
            out.dataset.irrelevant.push_back(points[i]);
    }
    validate_dataset(out.dataset);
    return out;
}

}  // namespace stclust
