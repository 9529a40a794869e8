#include "editwire/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace editwire {

using nlohmann::json;

HttpPolicy Config::http_policy() const {
  HttpPolicy p;
  p.host_delay = Milliseconds{ingest.host_delay_ms};
  p.max_retries = ingest.max_retries;
  p.backoff = Milliseconds{ingest.backoff_ms};
  return p;
}

StoreOptions Config::store_options() const {
  StoreOptions o;
  o.dedup_horizon = dedup_horizon;
  return o;
}

IngestFilters Config::filters() const {
  IngestFilters f;
  f.namespaces = ingest.namespaces;
  f.exclude_bots = ingest.exclude_bots;
  return f;
}

namespace {

// Walks one JSON object, handing each known key to a handler and rejecting
// the rest.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError("config '" + path_ + "' must be an object");
  }

  template <typename F>
  Section& on(const char* key, F&& handler) {
    known_.insert(key);
    if (auto it = obj_.find(key); it != obj_.end()) {
      try {
        handler(*it);
      } catch (const json::exception& e) {
        throw ConfigError("config key '" + name(key) + "': " + e.what());
      }
    }
    return *this;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!known_.contains(it.key())) throw ConfigError("unknown config key '" + name(it.key()) + "'");
    }
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> known_;
};

template <typename T>
T as(const json& v, const std::string& key) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.get<std::int64_t>() < 0) throw ConfigError("config key '" + key + "' must be >= 0");
    }
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  } else {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  }
  return v.get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (p.empty() || path.is_absolute() || p == ":memory:") return path;
  return base / path;
}

bool is_url(const std::string& s) {
  return s.rfind("http://", 0) == 0 || s.rfind("https://", 0) == 0;
}

}  // namespace

Config config_from_json(std::string_view document, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Config cfg;
  Section root(doc, "");
  root.on("storage", [&](const json& v) {
        Section(v, "storage")
            .on("path", [&](const json& p) {
              cfg.storage_path = resolve(base_dir, as<std::string>(p, "storage.path"));
            })
            .finish();
      })
      .on("ingest", [&](const json& v) {
        auto& in = cfg.ingest;
        Section(v, "ingest")
            .on("endpoint", [&](const json& x) { in.endpoint = as<std::string>(x, "ingest.endpoint"); })
            .on("stream_path", [&](const json& x) {
              in.stream_path = resolve(base_dir, as<std::string>(x, "ingest.stream_path"));
            })
            .on("window_minutes", [&](const json& x) {
              in.window_minutes = as<int>(x, "ingest.window_minutes");
              if (in.window_minutes <= 0) throw ConfigError("ingest.window_minutes must be > 0");
            })
            .on("max_pages", [&](const json& x) { in.max_pages = as<std::size_t>(x, "ingest.max_pages"); })
            .on("namespaces", [&](const json& x) {
              if (!x.is_array()) throw ConfigError("ingest.namespaces must be an array");
              in.namespaces.clear();
              for (const auto& n : x) in.namespaces.insert(as<int>(n, "ingest.namespaces[]"));
            })
            .on("exclude_bots", [&](const json& x) { in.exclude_bots = as<bool>(x, "ingest.exclude_bots"); })
            .on("host_delay_ms", [&](const json& x) { in.host_delay_ms = as<int>(x, "ingest.host_delay_ms"); })
            .on("max_retries", [&](const json& x) { in.max_retries = as<int>(x, "ingest.max_retries"); })
            .on("backoff_ms", [&](const json& x) { in.backoff_ms = as<int>(x, "ingest.backoff_ms"); })
            .finish();
      })
      .on("ranks", [&](const json& v) {
        auto& r = cfg.ranks;
        Section(v, "ranks")
            .on("weights", [&](const json& w) {
              if (!w.is_object()) throw ConfigError("ranks.weights must be an object");
              for (auto it = w.begin(); it != w.end(); ++it) {
                r.weights[it.key()] = as<double>(*it, "ranks.weights." + it.key());
              }
            })
            .on("threshold", [&](const json& x) { r.threshold = as<double>(x, "ranks.threshold"); })
            .on("enabled", [&](const json& x) {
              if (!x.is_array()) throw ConfigError("ranks.enabled must be an array");
              r.enabled.clear();
              for (const auto& n : x) r.enabled.push_back(as<std::string>(n, "ranks.enabled[]"));
            })
            .finish();
      })
      .on("selection", [&](const json& v) {
        auto& s = cfg.selection;
        Section(v, "selection")
            .on("min_chars", [&](const json& x) { s.min_chars = as<std::size_t>(x, "selection.min_chars"); })
            .on("top_editor_k", [&](const json& x) { s.top_editor_k = as<std::size_t>(x, "selection.top_editor_k"); })
            .on("expert_k", [&](const json& x) { s.expert_k = as<std::size_t>(x, "selection.expert_k"); })
            .on("mode", [&](const json& x) {
              std::string m = as<std::string>(x, "selection.mode");
              if (m == "any") s.mode = SelectionMode::any;
              else if (m == "all") s.mode = SelectionMode::all;
              else throw ConfigError("selection.mode must be 'any' or 'all'");
            })
            .finish();
      })
      .on("summarizer", [&](const json& v) {
        auto& s = cfg.summarizer;
        Section(v, "summarizer")
            .on("kind", [&](const json& x) {
              std::string k = as<std::string>(x, "summarizer.kind");
              if (k == "local") s.kind = SummarizerKind::local;
              else if (k == "remote") s.kind = SummarizerKind::remote;
              else throw ConfigError("summarizer.kind must be 'local' or 'remote'");
            })
            .on("sentence_limit", [&](const json& x) {
              s.sentence_limit = as<std::size_t>(x, "summarizer.sentence_limit");
              if (s.sentence_limit == 0) throw ConfigError("summarizer.sentence_limit must be >= 1");
            })
            .on("endpoint", [&](const json& x) { s.endpoint = as<std::string>(x, "summarizer.endpoint"); })
            .on("key", [&](const json& x) { s.api_key = as<std::string>(x, "summarizer.key"); })
            .finish();
      })
      .on("stats", [&](const json& v) {
        Section(v, "stats")
            .on("source", [&](const json& x) {
              std::string src = as<std::string>(x, "stats.source");
              cfg.stats_source = is_url(src) ? src : resolve(base_dir, src).string();
            })
            .finish();
      })
      .on("dedup", [&](const json& v) {
        Section(v, "dedup")
            .on("horizon_hours", [&](const json& x) {
              int h = as<int>(x, "dedup.horizon_hours");
              if (h < 0) throw ConfigError("dedup.horizon_hours must be >= 0");
              cfg.dedup_horizon = std::chrono::hours{h};
            })
            .finish();
      })
      .on("benchmark", [&](const json& v) {
        auto& b = cfg.benchmark;
        Section(v, "benchmark")
            .on("threshold_min", [&](const json& x) { b.thresholds.minimum = as<double>(x, "benchmark.threshold_min"); })
            .on("threshold_strong", [&](const json& x) { b.thresholds.strong = as<double>(x, "benchmark.threshold_strong"); })
            .on("keyword_n", [&](const json& x) {
              b.keyword_n = as<std::size_t>(x, "benchmark.keyword_n");
              if (b.keyword_n == 0) throw ConfigError("benchmark.keyword_n must be >= 1");
            })
            .on("denominator", [&](const json& x) {
              std::string d = as<std::string>(x, "benchmark.denominator");
              if (d == "union") b.denominator = MatchDenominator::union_of_sets;
              else if (d == "min") b.denominator = MatchDenominator::smaller_set;
              else throw ConfigError("benchmark.denominator must be 'union' or 'min'");
            })
            .on("keyword_endpoint", [&](const json& x) { b.keyword_endpoint = as<std::string>(x, "benchmark.keyword_endpoint"); })
            .on("keyword_key", [&](const json& x) { b.keyword_key = as<std::string>(x, "benchmark.keyword_key"); })
            .finish();
        if (!(b.thresholds.minimum <= b.thresholds.strong)) {
          throw ConfigError("benchmark.threshold_min must not exceed benchmark.threshold_strong");
        }
      })
      .on("server", [&](const json& v) {
        Section(v, "server")
            .on("host", [&](const json& x) { cfg.server.host = as<std::string>(x, "server.host"); })
            .on("port", [&](const json& x) { cfg.server.port = as<int>(x, "server.port"); })
            .finish();
      })
      .on("schedule", [&](const json& v) {
        Section(v, "schedule")
            .on("interval_minutes", [&](const json& x) {
              cfg.schedule_interval_minutes = as<int>(x, "schedule.interval_minutes");
              if (cfg.schedule_interval_minutes <= 0) {
                throw ConfigError("schedule.interval_minutes must be > 0");
              }
            })
            .finish();
      })
      .finish();
  cfg.ranks.validate();
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto base = std::filesystem::absolute(path).parent_path();
  return config_from_json(buffer.str(), base);
}

}  // namespace editwire
