#include "stclust/core.hpp"

#include <cmath>
#include <unordered_set>

#include "stclust/errors.hpp"

namespace stclust {

bool is_valid_utf8(const std::string& text) {
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    std::size_t i = 0, len = text.size();
    while (i < len) {
        unsigned char c = s[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        int extra;
        std::uint32_t cp;
        if ((c & 0xE0) == 0xC0) {
            extra = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            extra = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            extra = 3;
            cp = c & 0x07;
        } else {
            return false;  // stray continuation byte or 5+/FE/FF lead
        }
        if (i + extra >= len) return false;
        for (int k = 1; k <= extra; ++k) {
            if ((s[i + k] & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (s[i + k] & 0x3F);
        }
        // overlong encodings, UTF-16 surrogates and out-of-range scalars
        static constexpr std::uint32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
        if (cp < kMin[extra]) return false;
        if (cp >= 0xD800 && cp <= 0xDFFF) return false;
        if (cp > 0x10FFFF) return false;
        i += extra + 1;
    }
    return true;
}

void validate_record(const TweetRecord& rec) {
    if (!std::isfinite(rec.lat) || rec.lat < -90.0 || rec.lat > 90.0)
        throw OutOfRangeCoordinate("record '" + rec.id + "': latitude " + std::to_string(rec.lat) +
                                   " outside [-90, 90]");
    if (!std::isfinite(rec.lon) || rec.lon < -180.0 || rec.lon > 180.0)
        throw OutOfRangeCoordinate("record '" + rec.id + "': longitude " + std::to_string(rec.lon) +
                                   " outside [-180, 180]");
    if (!is_valid_utf8(rec.text))
        throw MalformedText("record '" + rec.id + "': text is not valid UTF-8");
}

void validate_params(const ClusterParams& p) {
    if (!(p.epsilon > 0.0) || !std::isfinite(p.epsilon))
        throw Error("epsilon must be positive and finite");
    if (p.n_min < 1) throw Error("n_min must be >= 1");
    if (p.n_max < 0) throw Error("n_max must be >= 0");
}

void validate_params(const FuzzyParams& p) {
    if (!(p.epsilon > 0.0) || !std::isfinite(p.epsilon))
        throw Error("epsilon must be positive and finite");
    if (p.n_min1 < 1) throw Error("n_min1 must be >= 1");
    if (p.n_min2 < p.n_min1) throw Error("n_min2 must be >= n_min1");
    if (p.n_max1 < 0) throw Error("n_max1 must be >= 0");
    if (p.n_max2 < p.n_max1) throw Error("n_max2 must be >= n_max1");
}

void validate_dataset(const LabeledDataset& ds) {
    std::unordered_set<std::int32_t> seen;
    seen.reserve(ds.relevant.size() + ds.irrelevant.size());
    auto check = [&](const std::vector<PlanarPoint>& pts, const char* side) {
        for (const auto& p : pts) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw Error(std::string(side) + " point has non-finite coordinates");
            if (p.source_index < 0)
                throw Error(std::string(side) + " point has negative source_index");
            if (!seen.insert(p.source_index).second)
                throw Error("source_index " + std::to_string(p.source_index) +
                            " appears in both relevant and irrelevant sets");
        }
    };
    check(ds.relevant, "relevant");
    check(ds.irrelevant, "irrelevant");
}

}  // namespace stclust
