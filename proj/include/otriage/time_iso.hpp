#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace otriage {

// All timestamps are UTC milliseconds since the Unix epoch.
using TimestampMs = std::int64_t;
using DurationMs = std::int64_t;

// Parses an ISO-8601 timestamp with an explicit zone:
//   2025-01-02T03:04:05Z
//   2025-01-02T03:04:05.678Z
//   2025-01-02T03:04:05.678+02:00
// Fractional seconds beyond millisecond precision are truncated.
// Throws ParseError on anything else.
TimestampMs parse_iso8601(std::string_view text);

// Canonical form: YYYY-MM-DDTHH:MM:SS.mmmZ. parse(format(t)) == t.
std::string format_iso8601(TimestampMs t);

}  // namespace otriage
