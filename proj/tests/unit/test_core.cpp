#include "doctest.h"
#include "stclust/core.hpp"
#include "stclust/errors.hpp"

#include <limits>

using namespace stclust;

TEST_CASE("validate_record accepts ordinary records") {
    TweetRecord rec{"t1", "lunch at Hyde Park \xF0\x9F\x8C\xB3", 51.5074, -0.1657, {}, {}};
    CHECK_NOTHROW(validate_record(rec));
    rec.lat = 90.0;
    rec.lon = -180.0;
    CHECK_NOTHROW(validate_record(rec));  // bounds are inclusive
}

TEST_CASE("validate_record rejects out-of-range coordinates") {
    TweetRecord rec{"t1", "hi", 91.0, 0.0, {}, {}};
    CHECK_THROWS_AS(validate_record(rec), OutOfRangeCoordinate);
    rec.lat = -90.5;
    CHECK_THROWS_AS(validate_record(rec), OutOfRangeCoordinate);
    rec.lat = 0.0;
    rec.lon = 180.25;
    CHECK_THROWS_AS(validate_record(rec), OutOfRangeCoordinate);
    rec.lon = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_record(rec), OutOfRangeCoordinate);
}

TEST_CASE("validate_record rejects malformed UTF-8") {
    TweetRecord rec{"t1", "", 0.0, 0.0, {}, {}};
    rec.text = std::string("\xC3\x28");  // bad continuation
    CHECK_THROWS_AS(validate_record(rec), MalformedText);
    rec.text = std::string("\xED\xA0\x80");  // UTF-16 surrogate
    CHECK_THROWS_AS(validate_record(rec), MalformedText);
    rec.text = std::string("\xC0\xAF");  // overlong '/'
    CHECK_THROWS_AS(validate_record(rec), MalformedText);
    rec.text = std::string("abc\x80");  // stray continuation byte
    CHECK_THROWS_AS(validate_record(rec), MalformedText);
}

TEST_CASE("is_valid_utf8 handles multi-byte sequences") {
    CHECK(is_valid_utf8(""));
    CHECK(is_valid_utf8("plain ascii"));
    CHECK(is_valid_utf8("caf\xC3\xA9"));
    CHECK(is_valid_utf8("\xE2\x82\xAC"));          // euro sign
    CHECK(is_valid_utf8("\xF0\x9F\x92\xA9"));      // astral plane
    CHECK_FALSE(is_valid_utf8("\xF8\x88\x80\x80\x80"));  // 5-byte form
    CHECK_FALSE(is_valid_utf8("\xE2\x82"));        // truncated
}

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(validate_params(ClusterParams{100.0, 1, 0}));
    CHECK_THROWS_AS(validate_params(ClusterParams{0.0, 1, 0}), Error);
    CHECK_THROWS_AS(validate_params(ClusterParams{10.0, 0, 0}), Error);
    CHECK_THROWS_AS(validate_params(ClusterParams{10.0, 1, -1}), Error);

    CHECK_NOTHROW(validate_params(FuzzyParams{100.0, 2, 5, 1, 4}));
    CHECK_NOTHROW(validate_params(FuzzyParams{100.0, 3, 3, 2, 2}));  // degenerate is legal
    CHECK_THROWS_AS(validate_params(FuzzyParams{100.0, 5, 2, 1, 4}), Error);
    CHECK_THROWS_AS(validate_params(FuzzyParams{100.0, 2, 5, 4, 1}), Error);
    CHECK_THROWS_AS(validate_params(FuzzyParams{100.0, 0, 5, 1, 4}), Error);
}

TEST_CASE("noise label is not a usable cluster id") {
    CHECK(kNoiseLabel < 1);  // cluster ids start at 1
}

TEST_CASE("dataset validation catches shared source indices") {
    LabeledDataset ds;
    ds.relevant.push_back({0.0, 0.0, 0});
    ds.irrelevant.push_back({1.0, 1.0, 0});
    CHECK_THROWS_AS(validate_dataset(ds), Error);
    ds.irrelevant[0].source_index = 1;
    CHECK_NOTHROW(validate_dataset(ds));
    ds.relevant.push_back({std::numeric_limits<double>::infinity(), 0.0, 2});
    CHECK_THROWS_AS(validate_dataset(ds), Error);
}
