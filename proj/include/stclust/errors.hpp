#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stclust {

// Base class for all toolkit errors. CLI maps these to exit code 2 when they
// come from input handling, 1 when they signal a broken runtime invariant.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Latitude outside [-90, 90] or longitude outside [-180, 180].
struct OutOfRangeCoordinate : Error {
    using Error::Error;
};

// Record text is not valid UTF-8.
struct MalformedText : Error {
    using Error::Error;
};

// Unparseable CSV/JSONL input; carries the 1-based line the record starts on.
struct ParseError : Error {
    std::size_t line;
    ParseError(std::size_t line_no, const std::string& what)
        : Error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

// No record matched the relevance queries; clustering would be vacuous.
struct EmptyRelevantSet : Error {
    using Error::Error;
};

// k-NN profile requested with k >= number of points.
struct KTooLarge : Error {
    using Error::Error;
};

// Brute-force oracle refused an instance too large to check exhaustively.
struct InstanceTooLarge : Error {
    using Error::Error;
};

}  // namespace stclust
