#pragma once

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stclust/core.hpp"
#include "stclust/geo.hpp"

namespace stclust {

enum class RecordFormat : std::uint8_t { Csv, Jsonl };

// Reads records from a stream. CSV needs the header id,text,lat,lon with
// optional user_id,created_at columns (RFC-4180 quoting, embedded newlines
// fine); JSONL wants one object per line with the same fields. Unknown
// columns/fields are ignored. Every record is validated; errors carry the
// 1-based line the record starts on.
std::vector<TweetRecord> parse_records(std::istream& in, RecordFormat format);

// Convenience: open path and parse; format inferred from the extension
// (.jsonl/.ndjson -> JSONL, anything else CSV) unless given explicitly.
std::vector<TweetRecord> parse_records_file(const std::string& path,
                                            std::optional<RecordFormat> format = {});

// True when any query occurs in text as a raw substring. Case-insensitive
// mode folds ASCII letters only.
bool matches_any(const std::string& text, const std::vector<std::string>& queries,
                 bool case_sensitive = true);

Relevance classify(const TweetRecord& record, const std::vector<std::string>& queries,
                   bool case_sensitive = true);

std::vector<Relevance> classify_all(const std::vector<TweetRecord>& records,
                                    const std::vector<std::string>& queries,
                                    bool case_sensitive = true);

// Drops every maximal same-user run of > limit consecutive posts (ordered by
// created_at) at one exact (lat, lon); everything else keeps input order.
// Records missing user_id or created_at never join a run. When none carry
// both fields the call is a no-op and *warned (if given) is set.
std::vector<TweetRecord> filter_consecutive_posts(const std::vector<TweetRecord>& records,
                                                  int limit = 3, bool* warned = nullptr);

// Point of interest: a center plus the text queries that define relevance.
struct PoiSpec {
    std::string name;
    double center_lat = 0.0;
    double center_lon = 0.0;
    std::vector<std::string> queries;
};

// Disk the analysis is restricted to. Center is carried both in degrees and
// in the dataset's planar frame; precision_at_radius is the relevant share
// within the final radius. meets_threshold is false only when even the
// smallest radius fell below the precision threshold.
struct QueryRegion {
    double center_lat = 0.0;
    double center_lon = 0.0;
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 0.0;
    double precision_at_radius = 0.0;
    bool meets_threshold = true;
};

struct AssembleOptions {
    double eta = 0.07;        // minimum relevant share a radius must keep
    double r0 = 500.0;        // first radius, meters
    double step = 100.0;      // radius increment, meters
    bool case_sensitive = true;
    // Projection anchor; defaults to the POI center.
    std::optional<std::pair<double, double>> projection_origin;
};

// Grows the radius from r0 in steps and returns the last radius whose
// relevant share is still >= eta, stopping at the first violation; the radius
// never exceeds the farthest record. A radius containing no records counts as
// vacuously precise. If r0 itself violates eta, r0 comes back with
// meets_threshold = false.
QueryRegion build_query_region(const std::vector<PlanarPoint>& points,
                               const std::vector<Relevance>& relevance, const PoiSpec& poi,
                               const Projection& proj, const AssembleOptions& opts = {});

struct AssembledData {
    LabeledDataset dataset;
    QueryRegion region;
    std::vector<Relevance> relevance;  // per input record, including dropped ones
};

// Full pipeline: validate + classify + project + build region + keep records
// inside it. Throws EmptyRelevantSet when no record matches the queries.
AssembledData assemble_dataset(const std::vector<TweetRecord>& records, const PoiSpec& poi,
                               const AssembleOptions& opts = {});

}  // namespace stclust
