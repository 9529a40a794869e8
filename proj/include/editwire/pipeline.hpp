#pragma once

#include <atomic>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "editwire/config.hpp"
#include "editwire/graph_store.hpp"
#include "editwire/ingest.hpp"

namespace editwire {

using Clock = std::function<Instant()>;

/// A clock that always reports `t`.
Clock pinned_clock(Instant t);
Clock system_clock();

/// One pass of the news algorithm: working set → ingest → selection → news
/// creation → saving. A run commits as a whole or not at all.
class Pipeline {
 public:
  explicit Pipeline(Config config, Clock clock = system_clock());

  /// Acquires edits per the config: the recorded stream when
  /// ingest.stream_path is set, otherwise the live recent-changes endpoint
  /// over the last ingest.window_minutes.
  RunReport run(GraphStore& store) const;

  /// Runs over an already acquired edit list. Filters still apply.
  RunReport run_with_edits(GraphStore& store, const std::vector<EditRecord>& edits,
                           std::optional<TimeWindow> window = std::nullopt) const;

  const Config& config() const { return config_; }

 private:
  Config config_;
  Clock clock_;
};

/// Opens the configured store and runs one pass.
RunReport run_pipeline(const Config& config, Clock clock = system_clock());

/// Calls `task` every `interval` on a background thread. A tick that arrives
/// while the previous task is still running is skipped, so runs never
/// overlap.
class Scheduler {
 public:
  Scheduler(std::chrono::milliseconds interval, std::function<void()> task);
  ~Scheduler();
  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  /// The first run starts immediately.
  void start();
  /// Waits for a running task to finish.
  void stop();

  std::size_t runs_started() const { return started_.load(); }
  std::size_t ticks_skipped() const { return skipped_.load(); }

 private:
  void tick_loop();

  std::chrono::milliseconds interval_;
  std::function<void()> task_;
  std::atomic<bool> busy_{false};
  std::atomic<std::size_t> started_{0};
  std::atomic<std::size_t> skipped_{0};
  std::mutex mutex_;
  std::condition_variable wake_;
  bool stopping_ = false;
  std::thread ticker_;
  std::thread worker_;
};

}  // namespace editwire
