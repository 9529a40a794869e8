#include "editwire/stats_provider.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace editwire {

using nlohmann::json;

PageViewStats PageViewStats::zeros(std::string title, bool missing) {
  PageViewStats s;
  s.page_title = std::move(title);
  s.missing = missing;
  return s;
}

PageViewStats stats_from_json(const std::string& page_title, std::string_view document,
                              Instant now) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError("stats document for '" + page_title + "' is not JSON: " + e.what());
  }
  if (!doc.is_object()) throw ParseError("stats document for '" + page_title + "' is not an object");
  const json* daily = &doc;
  if (auto it = doc.find("daily_views"); it != doc.end()) {
    if (!it->is_object()) throw ParseError("'daily_views' is not an object");
    daily = &*it;
  }

  PageViewStats stats = PageViewStats::zeros(page_title, false);
  // Day i of the window is (today - 30 + i); today itself is excluded.
  const Instant today = start_of_day(now);
  const Instant first = today - std::chrono::days{kStatsDays};
  for (auto it = daily->begin(); it != daily->end(); ++it) {
    auto day = parse_iso8601(it.key());
    if (!day) continue;  // tolerate foreign keys such as "title" or "rank"
    if (!it->is_number_integer()) {
      throw ParseError("view count for " + it.key() + " is not an integer");
    }
    Instant d = start_of_day(*day);
    if (d < first || d >= today) continue;
    auto index = static_cast<std::size_t>((d - first) / std::chrono::days{1});
    stats.daily_views[index] = std::max<std::int64_t>(0, it->get<std::int64_t>());
  }
  stats.views_yesterday = stats.daily_views.back();
  for (auto v : stats.daily_views) stats.views_last_30_days_total += v;
  return stats;
}

std::string title_to_path_segment(const std::string& title) {
  std::string out = trim(title);
  for (char& c : out) {
    if (c == ' ') c = '_';
  }
  return out;
}

StatsProvider::StatsProvider(std::string source, HttpClient http)
    : source_(std::move(source)), http_(std::move(http)) {}

PageViewStats StatsProvider::fetch_stats(const std::string& page_title, Instant now) const {
  if (source_.empty()) return PageViewStats::zeros(page_title);
  const std::string segment = title_to_path_segment(page_title);
  if (source_.rfind("http://", 0) == 0 || source_.rfind("https://", 0) == 0) {
    std::string url = source_;
    if (url.back() != '/') url.push_back('/');
    url += url_encode(segment);
    HttpResponse response;
    try {
      response = http_.get(url);
    } catch (const TransportError& e) {
      throw ProviderError(std::string("stats source unavailable: ") + e.what());
    }
    if (response.status == 404) return PageViewStats::zeros(page_title);
    if (response.status != 200) {
      throw ProviderError("stats source returned HTTP " + std::to_string(response.status));
    }
    try {
      return stats_from_json(page_title, response.body, now);
    } catch (const ParseError& e) {
      throw ProviderError(std::string("bad stats response: ") + e.what());
    }
  }

  std::filesystem::path file = std::filesystem::path(source_) / (segment + ".json");
  std::ifstream in(file, std::ios::binary);
  if (!in) return PageViewStats::zeros(page_title);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return stats_from_json(page_title, buffer.str(), now);
}

}  // namespace editwire
