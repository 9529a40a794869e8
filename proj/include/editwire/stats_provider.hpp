#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "editwire/common.hpp"
#include "editwire/http.hpp"

namespace editwire {

inline constexpr std::size_t kStatsDays = 30;

/// Daily page views over the 30 complete UTC days ending yesterday.
struct PageViewStats {
  std::string page_title;
  std::array<std::int64_t, kStatsDays> daily_views{};  // oldest first, back() = yesterday
  std::int64_t views_yesterday = 0;
  std::int64_t views_last_30_days_total = 0;
  /// Set when the source had no data for the page; all counts are then zero.
  bool missing = false;

  static PageViewStats zeros(std::string title, bool missing = true);
};

/// Builds stats from a stats document: either {"daily_views": {date: n}} or a
/// bare {date: n} object. Days outside the window are ignored, absent days
/// count as 0. `now` fixes which day is "yesterday".
PageViewStats stats_from_json(const std::string& page_title, std::string_view document,
                              Instant now);

/// Source of page statistics. `source` is either an http(s) URL prefix (the
/// page title is appended as a path segment) or a directory holding one
/// `<Title_with_underscores>.json` file per page.
class StatsProvider {
 public:
  StatsProvider(std::string source, HttpClient http = HttpClient{});

  /// Page unknown to the source → zeros with `missing` set. Transport failure
  /// after retries → ProviderError.
  PageViewStats fetch_stats(const std::string& page_title, Instant now) const;

  bool configured() const { return !source_.empty(); }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  HttpClient http_;
};

/// "Moore tornado" → "Moore_tornado"
std::string title_to_path_segment(const std::string& title);

}  // namespace editwire
