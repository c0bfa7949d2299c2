#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace stclust {

// "YYYY-MM-DDTHH:MM:SS[.frac][Z|+00:00|+0000]" -> UTC epoch seconds
// (fractional part truncated). nullopt when malformed or not UTC.
std::optional<std::int64_t> parse_iso8601_utc(const std::string& s);

// Epoch seconds -> canonical "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601_utc(std::int64_t epoch_seconds);

}  // namespace stclust
