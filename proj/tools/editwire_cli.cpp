// Command-line front end: run, schedule, replay, serve, benchmark, export.

#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "editwire/benchmark.hpp"
#include "editwire/config.hpp"
#include "editwire/feed_json.hpp"
#include "editwire/pipeline.hpp"
#include "editwire/server.hpp"

using namespace editwire;

namespace {

std::atomic<bool> g_stop{false};
FeedServer* g_server = nullptr;

void on_signal(int) {
  g_stop = true;
  if (g_server) g_server->stop();
}

Clock make_clock(const std::string& now) {
  if (now.empty()) return system_clock();
  auto t = parse_iso8601(now);
  if (!t) throw ConfigError("--now must be an ISO-8601 instant: " + now);
  return pinned_clock(*t);
}

void print_report(const RunReport& report) { std::cout << run_report_json(report) << '\n'; }

std::vector<FeedStory> load_stories(const std::string& source, const Config& cfg) {
  FeedParseResult parsed = fetch_feed(source, HttpClient(cfg.http_policy()));
  if (parsed.dropped_undated > 0) {
    std::cerr << "warning: " << source << ": dropped " << parsed.dropped_undated
              << " undated entries\n";
  }
  if (cfg.benchmark.keyword_endpoint.empty()) {
    assign_keywords(parsed.stories, cfg.benchmark.keyword_n);
  } else {
    HttpClient http(cfg.http_policy());
    for (auto& s : parsed.stories) {
      s.keywords = extract_keywords_remote(s.title + " " + s.body, cfg.benchmark.keyword_n,
                                           cfg.benchmark.keyword_endpoint,
                                           cfg.benchmark.keyword_key, http);
    }
  }
  return std::move(parsed.stories);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"editwire: news from collaborative page edits"};
  app.require_subcommand(1);

  std::string config_path;
  std::string store_override;
  std::string now;
  app.add_option("-c,--config", config_path, "JSON config file");
  app.add_option("--store", store_override, "Store file (overrides storage.path)");
  app.add_option("--now", now, "Pin the run clock to this ISO-8601 instant");

  auto* run = app.add_subcommand("run", "One pipeline pass");

  auto* schedule = app.add_subcommand("schedule", "Run the pipeline periodically");
  int interval_minutes = 0;
  schedule->add_option("--interval-minutes", interval_minutes,
                       "Minutes between runs (default: schedule.interval_minutes)");

  auto* replay = app.add_subcommand("replay", "One pipeline pass over a recorded change stream");
  std::string stream_path;
  replay->add_option("--stream", stream_path, "Line-delimited JSON change stream")->required();

  auto* serve = app.add_subcommand("serve", "Serve the news feed over HTTP");
  std::string host;
  int port = -1;
  serve->add_option("--host", host, "Bind address (default: server.host)");
  serve->add_option("--port", port, "Port (default: server.port)");

  auto* bench = app.add_subcommand("benchmark", "Compare two feeds for overlap and freshness");
  std::string left, right, min_class = "strong", json_out;
  bench->add_option("--left", left, "Feed URL or file (RSS, Atom or engine feed JSON)")->required();
  bench->add_option("--right", right, "Feed URL or file")->required();
  bench->add_option("--min-class", min_class, "Minimum match class kept")
      ->check(CLI::IsMember({"weak", "strong"}));
  bench->add_option("--json", json_out, "Also write the report as JSON to this file");

  auto* exp = app.add_subcommand("export", "Write the full news list as feed JSON");
  std::string output;
  exp->add_option("-o,--output", output, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    Config cfg = config_path.empty() ? Config{} : load_config(config_path);
    if (!store_override.empty()) cfg.storage_path = store_override;
    Clock clock = make_clock(now);

    if (*run) {
      print_report(run_pipeline(cfg, clock));
    } else if (*replay) {
      cfg.ingest.stream_path = stream_path;
      print_report(run_pipeline(cfg, clock));
    } else if (*schedule) {
      if (interval_minutes > 0) cfg.schedule_interval_minutes = interval_minutes;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      Scheduler scheduler(std::chrono::minutes{cfg.schedule_interval_minutes}, [&] {
        print_report(run_pipeline(cfg, clock));
      });
      scheduler.start();
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
      scheduler.stop();
    } else if (*serve) {
      FeedServer server(cfg.storage_path, cfg.store_options());
      int bound = server.bind(host.empty() ? cfg.server.host : host,
                              port >= 0 ? port : cfg.server.port);
      std::cerr << "serving " << cfg.storage_path.string() << " on port " << bound << '\n';
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      server.listen();
      g_server = nullptr;
    } else if (*bench) {
      OverlapOptions options;
      options.min_class = match_class_from_string(min_class);
      options.thresholds = cfg.benchmark.thresholds;
      options.denominator = cfg.benchmark.denominator;
      auto report = compute_overlap(load_stories(left, cfg), load_stories(right, cfg), options);
      auto freshness = freshness_report(report.pairs);
      std::cout << benchmark_report_table(report, freshness);
      if (!json_out.empty()) {
        std::ofstream out(json_out, std::ios::binary);
        if (!out) throw IoError("cannot write " + json_out);
        out << benchmark_report_json(report, freshness) << '\n';
      }
    } else if (*exp) {
      GraphStore store(cfg.storage_path, cfg.store_options());
      std::string feed = export_feed(store);
      if (output.empty()) {
        std::cout << feed;
      } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw IoError("cannot write " + output);
        out << feed;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
