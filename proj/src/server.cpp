#include "editwire/server.hpp"

#include <charconv>

#include "editwire/feed_json.hpp"
#include "httplib.h"
#include "json.hpp"

namespace editwire {

struct FeedServer::Impl {
  std::filesystem::path store_path;
  StoreOptions options;
  httplib::Server server;
};

namespace {

void send_json(httplib::Response& res, int status, const std::string& body) {
  res.status = status;
  res.set_content(body, "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, nlohmann::json{{"error", message}}.dump());
}

}  // namespace

FeedServer::FeedServer(std::filesystem::path store_path, StoreOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->store_path = std::move(store_path);
  impl_->options = options;
  // Create the schema up front so readers never race on it.
  GraphStore init(impl_->store_path, impl_->options);

  Impl* impl = impl_.get();
  auto open = [impl] { return GraphStore(impl->store_path, impl->options); };

  impl->server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, R"({"status":"ok"})");
  });

  impl->server.Get("/news", [open](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> category;
    std::optional<std::size_t> limit;
    if (req.has_param("category")) category = req.get_param_value("category");
    if (req.has_param("limit")) {
      std::string raw = req.get_param_value("limit");
      std::size_t value = 0;
      auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
      if (ec != std::errc() || ptr != raw.data() + raw.size()) {
        send_error(res, 400, "limit must be a non-negative integer");
        return;
      }
      limit = value;
    }
    send_json(res, 200, feed_json(open().list_news(category, limit)));
  });

  impl->server.Get(R"(/news/([^/]+))", [open](const httplib::Request& req, httplib::Response& res) {
    auto item = open().find_news(req.matches[1]);
    if (!item) {
      send_error(res, 404, "no such news item");
      return;
    }
    send_json(res, 200, news_item_json(*item));
  });

  impl->server.Get(R"(/runs/([^/]+))", [open](const httplib::Request& req, httplib::Response& res) {
    auto run = open().find_run(req.matches[1]);
    if (!run) {
      send_error(res, 404, "no such run");
      return;
    }
    send_json(res, 200, run_report_json(*run));
  });

  impl->server.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          send_error(res, 500, e.what());
        } catch (...) {
          send_error(res, 500, "internal error");
        }
      });
}

FeedServer::~FeedServer() { stop(); }

int FeedServer::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = impl_->server.bind_to_any_port(host);
    if (bound <= 0) throw Error("cannot bind feed server to " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error("cannot bind feed server to " + host + ":" + std::to_string(port));
  }
  return port;
}

void FeedServer::listen() {
  if (!impl_->server.listen_after_bind()) throw Error("feed server stopped with an error");
}

void FeedServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool FeedServer::running() const { return impl_->server.is_running(); }

}  // namespace editwire
