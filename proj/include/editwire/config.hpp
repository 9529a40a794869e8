#pragma once

#include <chrono>
#include <filesystem>
#include <set>
#include <string>

#include "editwire/benchmark.hpp"
#include "editwire/graph_store.hpp"
#include "editwire/news_builder.hpp"
#include "editwire/ranker.hpp"

namespace editwire {

struct IngestConfig {
  std::string endpoint;  // MediaWiki api.php URL
  std::filesystem::path stream_path;  // recorded stream; wins over endpoint when set
  int window_minutes = 60;
  std::size_t max_pages = 500;
  std::set<int> namespaces{0};
  bool exclude_bots = true;
  int host_delay_ms = 200;
  int max_retries = 3;
  int backoff_ms = 500;
};

struct BenchmarkConfig {
  MatchThresholds thresholds;
  std::size_t keyword_n = 10;
  MatchDenominator denominator = MatchDenominator::union_of_sets;
  std::string keyword_endpoint;  // optional remote keyword service
  std::string keyword_key;
};

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
};

/// Engine configuration, read from a single JSON document. Every key is
/// optional; see README for the full key list.
struct Config {
  std::filesystem::path storage_path = "editwire.db";
  IngestConfig ingest;
  RankConfig ranks = RankConfig::defaults();
  EditSelectionRule selection;
  SummarizerSpec summarizer;
  std::string stats_source;
  std::chrono::hours dedup_horizon{48};
  BenchmarkConfig benchmark;
  ServerConfig server;
  int schedule_interval_minutes = 15;

  HttpPolicy http_policy() const;
  StoreOptions store_options() const;
  IngestFilters filters() const;
};

/// Relative paths are resolved against `base_dir`. Unknown keys and
/// ill-typed values raise ConfigError.
Config config_from_json(std::string_view document,
                        const std::filesystem::path& base_dir = std::filesystem::current_path());

Config load_config(const std::filesystem::path& path);

}  // namespace editwire
