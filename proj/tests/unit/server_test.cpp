#include "editwire/server.hpp"

#include <gtest/gtest.h>

#include <thread>

#include "editwire/feed_json.hpp"
#include "editwire/pipeline.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace editwire;
using namespace editwire::testing;

namespace {

class ServerTest : public ::testing::Test {
 protected:
  void start(bool populate) {
    store_path_ = dir_ / "feed.db";
    if (populate) {
      Config c = load_config(data_path("fixture_config.json"));
      c.storage_path = store_path_;
      c.ingest.stream_path = data_path("fixture_stream.jsonl");
      GraphStore store(store_path_);
      run_id_ = Pipeline(c, pinned_clock(at("2026-05-20T22:41:00Z"))).run(store).run_id;
    }
    server_ = std::make_unique<FeedServer>(store_path_);
    port_ = server_->bind("127.0.0.1", 0);
    thread_ = std::thread([this] { server_->listen(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Result get(const std::string& path) { return client_->Get(path); }

  TempDir dir_;
  std::filesystem::path store_path_;
  std::string run_id_;
  std::unique_ptr<FeedServer> server_;
  std::thread thread_;
  int port_ = 0;
  std::unique_ptr<httplib::Client> client_;
};

}  // namespace

TEST_F(ServerTest, HealthAndEmptyFeed) {
  start(false);
  auto h = get("/health");
  ASSERT_TRUE(h);
  EXPECT_EQ(h->status, 200);
  EXPECT_EQ(nlohmann::json::parse(h->body)["status"], "ok");
  auto n = get("/news");
  ASSERT_TRUE(n);
  EXPECT_EQ(n->status, 200);
  EXPECT_EQ(n->body, "[]\n");
  EXPECT_EQ(get("/news/unknown")->status, 404);
  EXPECT_EQ(get("/runs/unknown")->status, 404);
}

TEST_F(ServerTest, FeedMatchesExportAndFilters) {
  start(true);
  auto all = get("/news");
  ASSERT_TRUE(all);
  EXPECT_EQ(all->body, read_file(data_path("golden_export.json")));

  auto sports = nlohmann::json::parse(get("/news?category=Sports")->body);
  std::set<int> pages;
  for (const auto& item : sports) pages.insert(item["page_id"].get<int>());
  EXPECT_EQ(pages, (std::set<int>{103, 104}));

  EXPECT_EQ(nlohmann::json::parse(get("/news?limit=2")->body).size(), 2u);
  EXPECT_EQ(get("/news?limit=two")->status, 400);
  EXPECT_EQ(get("/news?limit=-1")->status, 400);

  auto one = get("/news/n101-20260520T224100Z");
  ASSERT_EQ(one->status, 200);
  EXPECT_EQ(nlohmann::json::parse(one->body)["page_id"], 101);

  auto run = get("/runs/" + run_id_);
  ASSERT_EQ(run->status, 200);
  EXPECT_EQ(nlohmann::json::parse(run->body)["news_created"], 4);
}

TEST_F(ServerTest, SeesRunsCommittedAfterStart) {
  start(false);
  EXPECT_EQ(get("/news")->body, "[]\n");
  Config c = load_config(data_path("fixture_config.json"));
  c.storage_path = store_path_;
  c.ingest.stream_path = data_path("fixture_stream.jsonl");
  GraphStore store(store_path_);
  Pipeline(c, pinned_clock(at("2026-05-20T22:41:00Z"))).run(store);
  EXPECT_EQ(nlohmann::json::parse(get("/news")->body).size(), 4u);
}
