#include "pmllm/value.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

namespace pmllm {
namespace {

using namespace std::chrono;

std::optional<std::int64_t> to_micros(int y, unsigned mo, unsigned d, unsigned h, unsigned mi,
                                      unsigned s, std::int64_t frac_micros,
                                      std::int64_t offset_seconds) {
  const year_month_day ymd{year{y}, month{mo}, day{d}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) return std::nullopt;
  const auto day_count = sys_days{ymd}.time_since_epoch().count();
  std::int64_t secs = static_cast<std::int64_t>(day_count) * 86400 + h * 3600 + mi * 60 + s;
  secs -= offset_seconds;
  return secs * 1'000'000 + frac_micros;
}

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;

  bool done() const { return pos >= text.size(); }
  char peek() const { return done() ? '\0' : text[pos]; }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos;
    return true;
  }
  // Reads exactly `width` digits.
  std::optional<unsigned> digits(std::size_t width) {
    if (pos + width > text.size()) return std::nullopt;
    unsigned v = 0;
    for (std::size_t i = 0; i < width; ++i) {
      const char c = text[pos + i];
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + static_cast<unsigned>(c - '0');
    }
    pos += width;
    return v;
  }
  // Reads one or more fraction digits, keeping microsecond precision.
  std::optional<std::int64_t> fraction() {
    const std::size_t start = pos;
    std::int64_t micros = 0;
    int kept = 0;
    while (!done() && peek() >= '0' && peek() <= '9') {
      if (kept < 6) {
        micros = micros * 10 + (peek() - '0');
        ++kept;
      }
      ++pos;
    }
    if (pos == start) return std::nullopt;
    while (kept++ < 6) micros *= 10;
    return micros;
  }
  // Z, +HH:MM, +HHMM, +HH
  std::optional<std::int64_t> zone() {
    if (accept('Z') || accept('z')) return 0;
    int sign = 0;
    if (accept('+')) sign = 1;
    else if (accept('-')) sign = -1;
    else return std::nullopt;
    auto hh = digits(2);
    if (!hh) return std::nullopt;
    unsigned mm = 0;
    if (accept(':')) {
      auto m = digits(2);
      if (!m) return std::nullopt;
      mm = *m;
    } else if (auto m = digits(2)) {
      mm = *m;
    }
    return sign * static_cast<std::int64_t>(*hh * 3600 + mm * 60);
  }
};

}  // namespace

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  Cursor c{text};
  auto y = c.digits(4);
  if (!y || !c.accept('-')) return std::nullopt;
  auto mo = c.digits(2);
  if (!mo || !c.accept('-')) return std::nullopt;
  auto d = c.digits(2);
  if (!d) return std::nullopt;
  unsigned h = 0, mi = 0, s = 0;
  std::int64_t frac = 0, offset = 0;
  if (!c.done()) {
    if (!c.accept('T') && !c.accept('t') && !c.accept(' ')) return std::nullopt;
    auto hh = c.digits(2);
    if (!hh || !c.accept(':')) return std::nullopt;
    auto mm = c.digits(2);
    if (!mm) return std::nullopt;
    h = *hh;
    mi = *mm;
    if (c.accept(':')) {
      auto ss = c.digits(2);
      if (!ss) return std::nullopt;
      s = *ss;
      if (c.accept('.') || c.accept(',')) {
        auto f = c.fraction();
        if (!f) return std::nullopt;
        frac = *f;
      }
    }
    if (!c.done()) {
      auto z = c.zone();
      if (!z) return std::nullopt;
      offset = *z;
    }
  }
  if (!c.done()) return std::nullopt;
  auto micros = to_micros(static_cast<int>(*y), *mo, *d, h, mi, s, frac, offset);
  if (!micros) return std::nullopt;
  return Timestamp{*micros};
}

std::optional<Timestamp> parse_timestamp(std::string_view text, std::string_view format) {
  if (format.empty() || format == "ISO8601") return parse_iso8601(text);
  Cursor c{text};
  unsigned y = 1970, mo = 1, d = 1, h = 0, mi = 0, s = 0;
  std::int64_t frac = 0, offset = 0;
  for (std::size_t i = 0; i < format.size(); ++i) {
    if (format[i] != '%' || i + 1 == format.size()) {
      if (!c.accept(format[i])) return std::nullopt;
      continue;
    }
    const char spec = format[++i];
    std::optional<unsigned> v;
    switch (spec) {
      case 'Y': v = c.digits(4); if (v) y = *v; break;
      case 'm': v = c.digits(2); if (v) mo = *v; break;
      case 'd': v = c.digits(2); if (v) d = *v; break;
      case 'H': v = c.digits(2); if (v) h = *v; break;
      case 'M': v = c.digits(2); if (v) mi = *v; break;
      case 'S': v = c.digits(2); if (v) s = *v; break;
      case 'f': {
        auto f = c.fraction();
        if (!f) return std::nullopt;
        frac = *f;
        v = 0;
        break;
      }
      case 'z': {
        auto z = c.zone();
        if (!z) return std::nullopt;
        offset = *z;
        v = 0;
        break;
      }
      case '%': v = c.accept('%') ? std::optional<unsigned>{0} : std::nullopt; break;
      default: return std::nullopt;
    }
    if (!v) return std::nullopt;
  }
  if (!c.done()) return std::nullopt;
  auto micros = to_micros(static_cast<int>(y), mo, d, h, mi, s, frac, offset);
  if (!micros) return std::nullopt;
  return Timestamp{*micros};
}

namespace {

std::string format_with(Timestamp ts, char separator) {
  const sys_time<microseconds> tp{microseconds{ts.micros}};
  const auto day_point = floor<days>(tp);
  const year_month_day ymd{day_point};
  const hh_mm_ss<microseconds> tod{tp - day_point};
  std::array<char, 48> buf{};
  int n = std::snprintf(buf.data(), buf.size(), "%04d-%02u-%02u%c%02d:%02d:%02d",
                        static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                        static_cast<unsigned>(ymd.day()), separator,
                        static_cast<int>(tod.hours().count()),
                        static_cast<int>(tod.minutes().count()),
                        static_cast<int>(tod.seconds().count()));
  std::string out(buf.data(), static_cast<std::size_t>(n));
  if (const auto sub = tod.subseconds().count(); sub != 0) {
    n = std::snprintf(buf.data(), buf.size(), ".%06lld", static_cast<long long>(sub));
    out.append(buf.data(), static_cast<std::size_t>(n));
  }
  return out;
}

}  // namespace

std::string format_timestamp(Timestamp ts) { return format_with(ts, 'T'); }

std::string format_timestamp_sql(Timestamp ts) { return format_with(ts, ' '); }

std::string_view to_string(ColumnType type) {
  switch (type) {
    case ColumnType::String: return "string";
    case ColumnType::Integer: return "integer";
    case ColumnType::Float: return "float";
    case ColumnType::Timestamp: return "timestamp";
    case ColumnType::Boolean: return "boolean";
  }
  return "string";
}

std::string format_float(double d) {
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), d);
  std::string out(buf.data(), end);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string format_seconds(double seconds) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), seconds,
                                 std::chars_format::fixed, 1);
  std::string out(buf.data(), end);
  if (out == "-0.0") out = "0.0";
  return out;
}

std::string to_text(const Value& v) {
  struct Visitor {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(double d) const { return format_float(d); }
    std::string operator()(Timestamp t) const { return format_timestamp(t); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, v);
}

}  // namespace pmllm
