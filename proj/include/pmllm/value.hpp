#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace pmllm {

/// Instant in UTC with microsecond resolution.
struct Timestamp {
  std::int64_t micros = 0;  // since 1970-01-01T00:00:00Z

  static constexpr Timestamp from_seconds(std::int64_t s) { return {s * 1'000'000}; }
  constexpr double seconds_since(Timestamp earlier) const {
    return static_cast<double>(micros - earlier.micros) / 1e6;
  }
  friend constexpr auto operator<=>(Timestamp, Timestamp) = default;
};

/// Parses ISO-8601 date-times: `YYYY-MM-DD`, optionally followed by `T` or a
/// space and `HH:MM[:SS[.fraction]]`, optionally followed by `Z` or a
/// `+HH:MM`/`-HHMM` offset. Strings without a zone are taken as UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Parses with a strftime-like pattern. Supported: %Y %m %d %H %M %S %f
/// (fraction digits) %z (Z or +HH[:]MM) and %%; other characters match
/// literally. The pattern "ISO8601" (or an empty pattern) selects
/// parse_iso8601.
std::optional<Timestamp> parse_timestamp(std::string_view text, std::string_view format);

/// `YYYY-MM-DDTHH:MM:SS`, with `.ffffff` appended when micros are non-zero.
std::string format_timestamp(Timestamp ts);

/// Same as format_timestamp with a space separator (the SQL storage form).
std::string format_timestamp_sql(Timestamp ts);

enum class ColumnType { String, Integer, Float, Timestamp, Boolean };

std::string_view to_string(ColumnType type);

/// A nullable cell. std::monostate is null.
using Value = std::variant<std::monostate, std::string, std::int64_t, double, Timestamp, bool>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

/// Text form used by CSV export and abstractions; null renders as "".
/// Floats always carry a decimal point or exponent so they re-import as floats.
std::string to_text(const Value& v);

/// Shortest round-trip representation of a double, always containing '.' or 'e'.
std::string format_float(double d);

/// Seconds with exactly one decimal place, e.g. "5400.0".
std::string format_seconds(double seconds);

}  // namespace pmllm
