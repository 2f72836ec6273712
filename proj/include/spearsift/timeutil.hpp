#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace spearsift {

using Timestamp = std::chrono::sys_seconds;

// Accepts "YYYY-MM-DD[T| ]HH:MM[:SS[.fff]][Z|+HH:MM|-HH:MM|+HHMM]" and
// returns the instant in UTC. Fractional seconds are truncated.
std::optional<Timestamp> parse_iso8601(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_iso8601(Timestamp ts);

// RFC 2822 Date header, e.g. "Thu, 08 Dec 2011 08:27:00 +0000".
std::optional<Timestamp> parse_rfc2822(std::string_view text);

// "YYYY-MM"
std::string format_month(std::chrono::year_month ym);

}  // namespace spearsift
