#include "editwire/stats_provider.hpp"

#include <gtest/gtest.h>

#include <numeric>

#include "json.hpp"
#include "test_support.hpp"

using namespace editwire;
using namespace editwire::testing;

namespace {

const Instant kNow = *parse_iso8601("2026-05-20T22:41:00Z");

void expect_consistent(const PageViewStats& s) {
  EXPECT_EQ(s.views_yesterday, s.daily_views.back());
  EXPECT_EQ(s.views_last_30_days_total,
            std::accumulate(s.daily_views.begin(), s.daily_views.end(), std::int64_t{0}));
  EXPECT_LE(s.views_yesterday, s.views_last_30_days_total);
}

HttpClient quick_client() {
  HttpPolicy p;
  p.host_delay = Milliseconds{0};
  p.backoff = Milliseconds{1};
  p.max_retries = 1;
  return HttpClient(p, std::make_shared<HostRateLimiter>());
}

}  // namespace

TEST(Stats, TitleToPathSegment) {
  EXPECT_EQ(title_to_path_segment("Moore tornado"), "Moore_tornado");
  EXPECT_EQ(title_to_path_segment("Moore, Oklahoma"), "Moore,_Oklahoma");
}

TEST(Stats, AbsentPageGivesZeros) {
  StatsProvider provider(data_path("stats").string());
  PageViewStats s = provider.fetch_stats("Bread", kNow);
  EXPECT_TRUE(s.missing);
  EXPECT_EQ(s.views_yesterday, 0);
  EXPECT_EQ(s.views_last_30_days_total, 0);
  expect_consistent(s);
}

TEST(Stats, FixtureFileHundredOfThreeThousand) {
  StatsProvider provider(data_path("stats").string());
  PageViewStats s = provider.fetch_stats("Jupiter", kNow);
  EXPECT_FALSE(s.missing);
  EXPECT_EQ(s.views_yesterday, 100);
  EXPECT_EQ(s.views_last_30_days_total, 3000);
  expect_consistent(s);
}

TEST(Stats, WindowIsThirtyCompleteDaysEndingYesterday) {
  // Moore,_Oklahoma.json also holds today (90000) and the day before the
  // window (777); both must be ignored.
  StatsProvider provider(data_path("stats").string());
  PageViewStats s = provider.fetch_stats("Moore, Oklahoma", kNow);
  EXPECT_EQ(s.views_yesterday, 550);
  EXPECT_EQ(s.views_last_30_days_total, 2000);
  expect_consistent(s);
}

TEST(Stats, UniformDaysSumToThirtyTimesV) {
  nlohmann::json doc = nlohmann::json::object();
  Instant day = start_of_day(kNow);
  for (int i = 1; i <= 30; ++i) doc[format_date(day - std::chrono::days{i})] = 42;
  PageViewStats s = stats_from_json("P", doc.dump(), kNow);
  EXPECT_EQ(s.views_yesterday, 42);
  EXPECT_EQ(s.views_last_30_days_total, 30 * 42);
  expect_consistent(s);
}

TEST(Stats, BadDocumentIsParseError) {
  EXPECT_THROW(stats_from_json("P", "[1,2]", kNow), ParseError);
  EXPECT_THROW(stats_from_json("P", "{oops", kNow), ParseError);
}

TEST(Stats, UrlSource) {
  FakeServer server;
  server.http().Get(R"(/views/(.+))", [](const httplib::Request& req, httplib::Response& res) {
    if (req.matches[1] == "Known_page") {
      res.set_content(R"({"daily_views":{"2026-05-19":7,"2026-05-18":3}})", "application/json");
    } else if (req.matches[1] == "Broken") {
      res.status = 500;
    } else {
      res.status = 404;
    }
  });
  server.start();
  StatsProvider provider(server.url("/views"), quick_client());
  PageViewStats known = provider.fetch_stats("Known page", kNow);
  EXPECT_EQ(known.views_yesterday, 7);
  EXPECT_EQ(known.views_last_30_days_total, 10);
  EXPECT_TRUE(provider.fetch_stats("Unknown", kNow).missing);
  EXPECT_THROW(provider.fetch_stats("Broken", kNow), ProviderError);
}

TEST(Stats, DeterministicForFixtureSource) {
  StatsProvider provider(data_path("stats").string());
  auto a = provider.fetch_stats("Real Madrid CF", kNow);
  auto b = provider.fetch_stats("Real Madrid CF", kNow);
  EXPECT_EQ(a.daily_views, b.daily_views);
  EXPECT_EQ(a.views_yesterday, 5000);
  EXPECT_EQ(a.views_last_30_days_total, 5000 + 29 * 1897);
}
