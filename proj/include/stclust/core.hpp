#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stclust {

// One geo-tagged post. user_id/created_at are optional; they only matter for
// the consecutive-post filter. created_at is a UTC epoch in whole seconds.
struct TweetRecord {
    std::string id;
    std::string text;
    double lat = 0.0;
    double lon = 0.0;
    std::optional<std::string> user_id;
    std::optional<std::int64_t> created_at;

    bool operator==(const TweetRecord&) const = default;
};

enum class Relevance : std::uint8_t { Relevant, Irrelevant };

// A record projected into the local planar frame (meters). source_index points
// back into the record list the dataset was assembled from.
struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
    std::int32_t source_index = -1;
};

// Relevant/irrelevant split of the projected records, plus the projection
// origin (degrees) so coordinates can be mapped back.
struct LabeledDataset {
    std::vector<PlanarPoint> relevant;    // the n points clustering walks over
    std::vector<PlanarPoint> irrelevant;  // the m points counted against cores
    double origin_lat = 0.0;
    double origin_lon = 0.0;

    std::int32_t n() const { return static_cast<std::int32_t>(relevant.size()); }
    std::int32_t m() const { return static_cast<std::int32_t>(irrelevant.size()); }
};

// Crisp parameters: a core point needs >= n_min relevant neighbors (itself
// included) and <= n_max irrelevant neighbors within epsilon.
struct ClusterParams {
    double epsilon = 0.0;
    int n_min = 1;
    int n_max = 0;
};

// Fuzzy parameters. The relaxed core test uses (n_min1, n_max2); the inner
// pair shapes the membership ramps.
struct FuzzyParams {
    double epsilon = 0.0;
    int n_min1 = 1;
    int n_min2 = 1;
    int n_max1 = 0;
    int n_max2 = 0;
};

// Distinguished noise label. Real clusters are numbered 1..num_clusters, so
// arithmetic on a noise label is loud rather than silently plausible.
inline constexpr std::int32_t kNoiseLabel = -1;

// Output of a clustering run. labels covers relevant points first (indices
// 0..n-1) then irrelevant points (n..n+m-1). core_flags covers relevant points
// only. fuzzy_scores is present iff the fuzzy algorithm produced the result;
// noise entries hold 0, cluster members hold their own score (cores) or the
// score of the core that labeled them.
struct ClusteringResult {
    std::vector<std::int32_t> labels;
    std::vector<bool> core_flags;
    std::optional<std::vector<double>> fuzzy_scores;
    std::int32_t num_clusters = 0;
};

// Throws OutOfRangeCoordinate / MalformedText if the record is unusable.
void validate_record(const TweetRecord& rec);

// True iff text is well-formed UTF-8 (rejects overlongs, surrogates, > U+10FFFF).
bool is_valid_utf8(const std::string& text);

// Parameter sanity checks; throw Error on violation.
void validate_params(const ClusterParams& p);
void validate_params(const FuzzyParams& p);

// Checks the dataset's structural invariants (finite coords, disjoint and
// non-negative source indices). Throws Error on violation.
void validate_dataset(const LabeledDataset& ds);

}  // namespace stclust
