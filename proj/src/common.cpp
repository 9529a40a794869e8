#include "editwire/common.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace editwire {

namespace {

using namespace std::chrono;

std::optional<Instant> make_instant(int y, int mo, int d, int h, int mi, int s) {
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
      s < 0 || s > 60) {
    return std::nullopt;
  }
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

bool read_digits(std::string_view s, std::size_t& pos, std::size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < count; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += count;
  out = v;
  return true;
}

bool expect(std::string_view s, std::size_t& pos, char c) {
  if (pos < s.size() && s[pos] == c) {
    ++pos;
    return true;
  }
  return false;
}

}  // namespace

std::optional<Instant> parse_iso8601(std::string_view text) {
  std::string t = trim(text);
  std::string_view s = t;
  std::size_t pos = 0;
  int y, mo, d, h = 0, mi = 0, sec = 0;
  if (!read_digits(s, pos, 4, y) || !expect(s, pos, '-') || !read_digits(s, pos, 2, mo) ||
      !expect(s, pos, '-') || !read_digits(s, pos, 2, d)) {
    return std::nullopt;
  }
  if (pos == s.size()) return make_instant(y, mo, d, 0, 0, 0);
  if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return std::nullopt;
  ++pos;
  if (!read_digits(s, pos, 2, h) || !expect(s, pos, ':') || !read_digits(s, pos, 2, mi)) {
    return std::nullopt;
  }
  if (expect(s, pos, ':') && !read_digits(s, pos, 2, sec)) return std::nullopt;
  if (expect(s, pos, '.')) {
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  int offset_minutes = 0;
  if (pos < s.size()) {
    char c = s[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      ++pos;
      int oh, om = 0;
      if (!read_digits(s, pos, 2, oh)) return std::nullopt;
      expect(s, pos, ':');
      if (pos < s.size() && !read_digits(s, pos, 2, om)) return std::nullopt;
      offset_minutes = (c == '+' ? 1 : -1) * (oh * 60 + om);
    } else {
      return std::nullopt;
    }
  }
  if (pos != s.size()) return std::nullopt;
  auto base = make_instant(y, mo, d, h, mi, sec);
  if (!base) return std::nullopt;
  return *base - minutes{offset_minutes};
}

std::optional<Instant> parse_rfc822(std::string_view text) {
  static constexpr std::array<std::string_view, 12> kMonths = {
      "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};
  std::string lower = to_lower_ascii(trim(text));
  std::string_view s = lower;
  std::size_t pos = 0;
  // Optional "Mon," prefix.
  if (auto comma = s.find(','); comma != std::string_view::npos && comma <= 9) {
    pos = comma + 1;
  }
  auto skip_ws = [&] {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  };
  auto read_int = [&](int& out) {
    std::size_t start = pos;
    int v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      ++pos;
    }
    out = v;
    return pos > start;
  };
  auto read_word = [&] {
    std::size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(start, pos - start);
  };

  int d, y, h = 0, mi = 0, sec = 0;
  skip_ws();
  if (!read_int(d)) return std::nullopt;
  skip_ws();
  std::string_view mon = read_word();
  if (mon.size() < 3) return std::nullopt;
  int mo = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (mon.substr(0, 3) == kMonths[i]) mo = static_cast<int>(i) + 1;
  }
  if (mo == 0) return std::nullopt;
  skip_ws();
  std::size_t year_start = pos;
  if (!read_int(y)) return std::nullopt;
  if (pos - year_start == 2) y += (y < 50 ? 2000 : 1900);
  skip_ws();
  if (pos < s.size()) {
    if (!read_int(h) || !expect(s, pos, ':') || !read_int(mi)) return std::nullopt;
    if (expect(s, pos, ':') && !read_int(sec)) return std::nullopt;
  }
  skip_ws();
  int offset_minutes = 0;
  if (pos < s.size()) {
    std::string_view zone = read_word();
    if (zone[0] == '+' || zone[0] == '-') {
      if (zone.size() != 5) return std::nullopt;
      std::size_t zp = 1;
      int oh, om;
      if (!read_digits(zone, zp, 2, oh) || !read_digits(zone, zp, 2, om)) return std::nullopt;
      offset_minutes = (zone[0] == '+' ? 1 : -1) * (oh * 60 + om);
    } else if (zone == "gmt" || zone == "ut" || zone == "utc" || zone == "z") {
      offset_minutes = 0;
    } else if (zone == "est") {
      offset_minutes = -5 * 60;
    } else if (zone == "edt") {
      offset_minutes = -4 * 60;
    } else if (zone == "cst") {
      offset_minutes = -6 * 60;
    } else if (zone == "cdt") {
      offset_minutes = -5 * 60;
    } else if (zone == "mst") {
      offset_minutes = -7 * 60;
    } else if (zone == "mdt") {
      offset_minutes = -6 * 60;
    } else if (zone == "pst") {
      offset_minutes = -8 * 60;
    } else if (zone == "pdt") {
      offset_minutes = -7 * 60;
    } else {
      return std::nullopt;
    }
  }
  auto base = make_instant(y, mo, d, h, mi, sec);
  if (!base) return std::nullopt;
  return *base - minutes{offset_minutes};
}

std::string format_iso8601(Instant t) {
  auto day_point = floor<days>(t);
  year_month_day ymd{day_point};
  hh_mm_ss tod{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

std::string format_compact(Instant t) {
  std::string iso = format_iso8601(t);
  std::string out;
  for (char c : iso) {
    if (c != '-' && c != ':') out.push_back(c);
  }
  return out;
}

std::string format_date(Instant t) { return format_iso8601(t).substr(0, 10); }

Instant start_of_day(Instant t) { return floor<days>(t); }

Instant now_utc() { return floor<seconds>(system_clock::now()); }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  return to_lower_ascii(s.substr(0, prefix.size())) == to_lower_ascii(prefix);
}

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}

}  // namespace editwire
