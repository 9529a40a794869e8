#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "editwire/graph_store.hpp"

namespace editwire {

/// Read-only HTTP/JSON feed over a store file:
///   GET /news?category=&limit=   feed entries, newest update first
///   GET /news/{id}               one entry or 404
///   GET /runs/{id}               one run report or 404
///   GET /health                  {"status":"ok"}
/// Each request opens its own store connection and sees the last committed
/// run.
class FeedServer {
 public:
  FeedServer(std::filesystem::path store_path, StoreOptions options = {});
  ~FeedServer();
  FeedServer(const FeedServer&) = delete;
  FeedServer& operator=(const FeedServer&) = delete;

  /// Binds to host:port; port 0 picks a free port. Returns the bound port.
  /// Throws Error when binding fails.
  int bind(const std::string& host, int port);

  /// Serves until stop(). Requires a successful bind().
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace editwire
