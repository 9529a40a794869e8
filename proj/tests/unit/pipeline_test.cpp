#include "editwire/pipeline.hpp"

#include <gtest/gtest.h>

#include "editwire/feed_json.hpp"
#include "test_support.hpp"

using namespace editwire;
using namespace editwire::testing;
using namespace std::chrono_literals;

namespace {

Config fixture_config(const TempDir& dir) {
  Config c = load_config(data_path("fixture_config.json"));
  c.storage_path = dir / "store.db";
  c.ingest.stream_path = data_path("fixture_stream.jsonl");
  return c;
}

const Instant kRunAt = *parse_iso8601("2026-05-20T22:41:00Z");

}  // namespace

TEST(Pipeline, EmptyStreamProducesEmptyReport) {
  TempDir dir;
  write_file(dir / "empty.jsonl", "");
  Config c = fixture_config(dir);
  c.ingest.stream_path = dir / "empty.jsonl";
  GraphStore store(c.storage_path);
  RunReport r = Pipeline(c, pinned_clock(kRunAt)).run(store);
  EXPECT_EQ(r.pages_considered, 0);
  EXPECT_EQ(r.pages_selected, 0);
  EXPECT_EQ(r.news_created, 0);
  EXPECT_EQ(r.news_updated, 0);
  EXPECT_TRUE(r.degradations.empty());
  EXPECT_EQ(store.run_count(), 1);
  EXPECT_EQ(store.find_run(r.run_id), r);
  EXPECT_EQ(export_feed(store), "[]\n");
}

TEST(Pipeline, FixtureRunMatchesGoldenAndRerunUpdates) {
  TempDir dir;
  Config c = fixture_config(dir);
  GraphStore store(c.storage_path, c.store_options());
  Pipeline p(c, pinned_clock(kRunAt));
  RunReport first = p.run(store);
  EXPECT_EQ(first.run_id, "run-20260520T224100Z-1");
  EXPECT_EQ(first.news_created, 4);
  EXPECT_EQ(first.news_updated, 0);
  EXPECT_TRUE(first.degradations.empty());
  EXPECT_EQ(export_feed(store), read_file(data_path("golden_export.json")));

  RunReport second = p.run(store);
  EXPECT_EQ(second.run_id, "run-20260520T224100Z-2");
  EXPECT_EQ(second.news_created, 0);
  EXPECT_EQ(second.news_updated, 4);
  EXPECT_EQ(store.list_news().size(), 4u);
}

TEST(Pipeline, SevenMinuteUpdateRefreshesTheItem) {
  TempDir dir;
  Config c = fixture_config(dir);
  GraphStore store(c.storage_path, c.store_options());
  Pipeline(c, pinned_clock(kRunAt)).run(store);
  auto before = store.find_news("n101-20260520T224100Z");
  ASSERT_TRUE(before);

  c.ingest.stream_path = data_path("fixture_update.jsonl");
  const Instant later = kRunAt + 7min;
  RunReport r = Pipeline(c, pinned_clock(later)).run(store);
  EXPECT_EQ(r.pages_considered, 1);
  EXPECT_EQ(r.news_created, 0);
  EXPECT_EQ(r.news_updated, 1);
  auto after = store.find_news("n101-20260520T224100Z");
  ASSERT_TRUE(after);
  EXPECT_EQ(after->generated_at, kRunAt);
  EXPECT_EQ(after->updated_at, later);
  EXPECT_GT(after->updated_at, before->updated_at);
  EXPECT_EQ(store.list_news().size(), 4u);
  std::size_t for_page = 0;
  for (const auto& n : store.list_news()) for_page += n.page_id == 101;
  EXPECT_EQ(for_page, 1u);
}

TEST(Pipeline, StatsOutageDegradesInsteadOfFailing) {
  TempDir dir;
  Config c = fixture_config(dir);
  c.stats_source = "http://127.0.0.1:1/views";
  c.ingest.max_retries = 0;
  c.ingest.backoff_ms = 1;
  c.ingest.host_delay_ms = 0;
  GraphStore store(c.storage_path, c.store_options());
  RunReport r = Pipeline(c, pinned_clock(kRunAt)).run(store);
  EXPECT_EQ(r.pages_considered, 7);
  EXPECT_EQ(r.degradations.size(), 7u);
  for (const auto& d : r.degradations) EXPECT_NE(d.find("stats fallback"), std::string::npos);
  EXPECT_EQ(store.run_count(), 1);
}

TEST(Pipeline, RemoteSummarizerOutageFallsBackToLocal) {
  TempDir dir;
  Config c = fixture_config(dir);
  c.summarizer.kind = SummarizerKind::remote;
  c.summarizer.endpoint = "http://127.0.0.1:1/summarize";
  c.ingest.max_retries = 0;
  c.ingest.backoff_ms = 1;
  c.ingest.host_delay_ms = 0;
  GraphStore store(c.storage_path, c.store_options());
  RunReport r = Pipeline(c, pinned_clock(kRunAt)).run(store);
  EXPECT_EQ(r.news_created, 4);
  // only pages 101 and 103 have more text than the sentence limit; the
  // others pass through without a remote call
  EXPECT_EQ(r.degradations.size(), 2u);
  for (const auto& d : r.degradations) EXPECT_NE(d.find("summarizer fallback"), std::string::npos);
  EXPECT_EQ(export_feed(store), read_file(data_path("golden_export.json")));
}

TEST(Pipeline, FailedRunLeavesNoTrace) {
  TempDir dir;
  Config c = fixture_config(dir);
  c.ranks.enabled.push_back("not_a_rank");
  c.ranks.weights["not_a_rank"] = 1.0;
  GraphStore store(c.storage_path, c.store_options());
  EXPECT_THROW(Pipeline(c, pinned_clock(kRunAt)).run(store), ConfigError);
  EXPECT_EQ(store.run_count(), 0);
  EXPECT_FALSE(store.has_page(101));
  EXPECT_EQ(store.author_count(), 0);
  EXPECT_TRUE(store.list_news().empty());
}

TEST(Pipeline, MissingSourceIsConfigError) {
  TempDir dir;
  Config c = fixture_config(dir);
  c.ingest.stream_path.clear();
  GraphStore store(c.storage_path);
  EXPECT_THROW(Pipeline(c, pinned_clock(kRunAt)).run(store), ConfigError);
}

TEST(Scheduler, RunsDoNotOverlap) {
  std::atomic<int> active{0};
  std::atomic<int> max_active{0};
  Scheduler s(20ms, [&] {
    int now = ++active;
    int seen = max_active.load();
    while (now > seen && !max_active.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(70ms);
    --active;
  });
  s.start();
  std::this_thread::sleep_for(300ms);
  s.stop();
  EXPECT_EQ(max_active.load(), 1);
  EXPECT_GE(s.runs_started(), 2u);
  EXPECT_GE(s.ticks_skipped(), 1u);
}

TEST(Scheduler, FastTaskRunsEveryTick) {
  std::atomic<int> calls{0};
  Scheduler s(10ms, [&] { ++calls; });
  s.start();
  std::this_thread::sleep_for(105ms);
  s.stop();
  EXPECT_GE(calls.load(), 5);
  EXPECT_EQ(static_cast<std::size_t>(calls.load()), s.runs_started());
}
