#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace editwire {

/// UTC instant at one-second resolution. Every timestamp in the engine uses it.
using Instant = std::chrono::sys_seconds;
using Seconds = std::chrono::seconds;

// Error hierarchy. Every engine failure derives from Error so callers can
// catch at whatever granularity they need.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TransportError : public Error {
 public:
  TransportError(const std::string& what, int last_status)
      : Error(what), last_status_(last_status) {}
  /// Last HTTP status seen, or -1 when no response was received at all.
  int last_status() const { return last_status_; }

 private:
  int last_status_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class IntegrityError : public Error {
 public:
  using Error::Error;
};

class StorageError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ProviderError : public Error {
 public:
  using Error::Error;
};

// ---- time ----

/// Parses "YYYY-MM-DDTHH:MM:SS[.fff](Z|+HH:MM|-HH:MM)" and the bare-date form
/// "YYYY-MM-DD". Also accepts a space instead of 'T'.
std::optional<Instant> parse_iso8601(std::string_view text);

/// Parses RFC 822 / RFC 1123 dates as used by RSS pubDate.
std::optional<Instant> parse_rfc822(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_iso8601(Instant t);

/// "YYYYMMDDTHHMMSSZ", used inside identifiers.
std::string format_compact(Instant t);

/// "YYYY-MM-DD" of the UTC day containing t.
std::string format_date(Instant t);

/// Midnight (UTC) of the day containing t.
Instant start_of_day(Instant t);

Instant now_utc();

// ---- strings ----

std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
bool starts_with_ci(std::string_view s, std::string_view prefix);

/// Number of Unicode code points in a UTF-8 string (counts non-continuation
/// bytes).
std::size_t utf8_length(std::string_view s);

/// Percent-encodes everything except unreserved characters.
std::string url_encode(std::string_view s);

}  // namespace editwire
