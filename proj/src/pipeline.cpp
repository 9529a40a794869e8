#include "editwire/pipeline.hpp"

#include <iostream>

#include "editwire/news_builder.hpp"
#include "editwire/ranker.hpp"
#include "editwire/stats_provider.hpp"

namespace editwire {

Clock pinned_clock(Instant t) {
  return [t] { return t; };
}

Clock system_clock() { return [] { return now_utc(); }; }

Pipeline::Pipeline(Config config, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)) {
  config_.ranks.validate();
}

RunReport Pipeline::run(GraphStore& store) const {
  const Instant now = clock_();
  const TimeWindow window{now - std::chrono::minutes{config_.ingest.window_minutes}, now};
  if (!config_.ingest.stream_path.empty()) {
    return run_with_edits(store, replay_stream(config_.ingest.stream_path), window);
  }
  if (config_.ingest.endpoint.empty()) {
    throw ConfigError("neither ingest.stream_path nor ingest.endpoint is configured");
  }
  RecentChangesClient client(config_.ingest.endpoint, HttpClient(config_.http_policy()));
  return run_with_edits(store, client.fetch_recent_changes(window, config_.filters()), window);
}

RunReport Pipeline::run_with_edits(GraphStore& store, const std::vector<EditRecord>& edits,
                                   std::optional<TimeWindow> window) const {
  const Instant now = clock_();
  const HttpClient http(config_.http_policy());
  RunReport report;
  report.started_at = now;
  report.run_id = "run-" + format_compact(now) + "-" + std::to_string(store.run_count() + 1);

  WorkingSetOptions ws_options;
  ws_options.fallback_window = window;
  ws_options.max_pages = config_.ingest.max_pages;
  const WorkingSet ws =
      build_working_set(apply_filters(edits, config_.filters()), report.run_id, ws_options);

  GraphStore::Transaction tx = store.begin();
  store.ingest_working_set(ws);
  report.pages_considered = static_cast<std::int64_t>(ws.pages.size());

  if (!ws.empty()) {
    StatsProvider stats_provider(config_.stats_source, http);
    std::map<PageId, PageViewStats> stats;
    for (const auto& [page_id, page] : ws.pages) {
      try {
        stats[page_id] = stats_provider.fetch_stats(page.title, now);
      } catch (const ProviderError& e) {
        stats[page_id] = PageViewStats::zeros(page.title);
        report.degradations.push_back("stats fallback for '" + page.title + "': " + e.what());
      }
    }

    const auto decisions = select_news_pages(ws, config_.ranks, stats, store);
    report.pages_selected = static_cast<std::int64_t>(decisions.size());

    std::set<std::string> top_editors;
    for (const auto& a : store.top_editors(config_.selection.top_editor_k)) {
      top_editors.insert(a.author_id);
    }

    for (const auto& decision : decisions) {
      const WorkingSetPage& page = ws.pages.at(decision.page_id);
      std::set<std::string> experts;
      for (const auto& category : page.categories) {
        for (const auto& a : store.category_top_experts(category, config_.selection.expert_k)) {
          experts.insert(a.author_id);
        }
      }
      const auto chosen = select_edits(page.edits, config_.selection, top_editors, experts);
      std::string text;
      try {
        text = aggregate_text(chosen);
      } catch (const EmptyAggregateError&) {
        report.degradations.push_back("no usable edit text for page " +
                                      std::to_string(decision.page_id));
        continue;
      }
      SummaryResult summary = summarize(text, config_.summarizer, http);
      if (summary.fallback_reason) {
        report.degradations.push_back("summarizer fallback for page " +
                                      std::to_string(decision.page_id) + ": " +
                                      *summary.fallback_reason);
      }
      NewsItem item = build_news_item(decision.page_id, page, decision, config_.ranks,
                                      summary.text, chosen, now);
      if (store.save_news_item(item).created) {
        ++report.news_created;
      } else {
        ++report.news_updated;
      }
    }
  }

  report.finished_at = clock_();
  store.save_run_report(report);
  tx.commit();
  return report;
}

RunReport run_pipeline(const Config& config, Clock clock) {
  GraphStore store(config.storage_path, config.store_options());
  return Pipeline(config, std::move(clock)).run(store);
}

// ---- scheduler ----

Scheduler::Scheduler(std::chrono::milliseconds interval, std::function<void()> task)
    : interval_(interval), task_(std::move(task)) {}

Scheduler::~Scheduler() { stop(); }

void Scheduler::start() {
  std::lock_guard<std::mutex> lock(mutex_);
  if (ticker_.joinable()) return;
  stopping_ = false;
  ticker_ = std::thread([this] { tick_loop(); });
}

void Scheduler::stop() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  if (ticker_.joinable()) ticker_.join();
  if (worker_.joinable()) worker_.join();
}

void Scheduler::tick_loop() {
  auto next = std::chrono::steady_clock::now();
  std::unique_lock<std::mutex> lock(mutex_);
  while (!stopping_) {
    if (busy_.load()) {
      ++skipped_;
    } else {
      if (worker_.joinable()) worker_.join();
      busy_ = true;
      ++started_;
      worker_ = std::thread([this] {
        try {
          task_();
        } catch (const std::exception& e) {
          std::cerr << "scheduled run failed: " << e.what() << '\n';
        }
        busy_ = false;
      });
    }
    next += interval_;
    wake_.wait_until(lock, next, [this] { return stopping_; });
  }
}

}  // namespace editwire
