#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "editwire/graph_store.hpp"
#include "editwire/ingest.hpp"
#include "httplib.h"

namespace editwire::testing {

std::filesystem::path data_dir();
std::filesystem::path data_path(const std::string& name);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Parses an ISO-8601 instant or aborts the test binary.
Instant at(const std::string& iso);

EditRecord make_edit(RevisionId rev, PageId page, const std::string& title,
                     const std::string& author, const std::string& iso_ts,
                     const std::string& text = "", std::vector<std::string> categories = {});

/// Small hand-checkable authorgraph: six pages, eight authors, 18 edits and
/// one news item (on page 5, generated before d's edit of it).
struct G1 {
  static constexpr PageId P1 = 1, P2 = 2, P3 = 3, P4 = 4, P5 = 5, P6 = 6;
  std::vector<EditRecord> edits;
  WorkingSet ws;
  NewsItem news;
};

G1 make_g1();

/// Ingests the G1 working set and persists its news item.
void load_g1(GraphStore& store, const G1& g);

/// Recount of every RankInputs field by looping over raw edit and news
/// lists. Shares no code with the store.
RankInputs brute_force_inputs(PageId page, const std::vector<EditRecord>& stored_edits,
                              const std::vector<NewsItem>& news, const WorkingSet& ws,
                              const PageViewStats& stats);

/// HTTP server on 127.0.0.1 with a free port, serving in a background thread.
class FakeServer {
 public:
  FakeServer();
  ~FakeServer();
  httplib::Server& http() { return server_; }
  /// Starts listening; register handlers first.
  void start();
  std::string url(const std::string& path = "") const;
  int port() const { return port_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace editwire::testing
