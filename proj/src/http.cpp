#include "editwire/http.hpp"

#include <thread>

#include "editwire/common.hpp"
#include "httplib.h"

namespace editwire {

struct HostRateLimiter::Permit::Slot {
  std::mutex mutex;
  std::chrono::steady_clock::time_point last_release{};
  bool used = false;
};

HostRateLimiter::Permit::~Permit() {
  if (slot_ && lock_.owns_lock()) {
    slot_->last_release = std::chrono::steady_clock::now();
    slot_->used = true;
  }
}

HostRateLimiter::Permit HostRateLimiter::acquire(const std::string& host, Milliseconds delay) {
  std::shared_ptr<Permit::Slot> slot;
  {
    std::lock_guard<std::mutex> guard(map_mutex_);
    auto& entry = slots_[host];
    if (!entry) entry = std::make_shared<Permit::Slot>();
    slot = entry;
  }
  std::unique_lock<std::mutex> lock(slot->mutex);
  if (slot->used) {
    auto ready = slot->last_release + delay;
    auto now = std::chrono::steady_clock::now();
    if (ready > now) std::this_thread::sleep_for(ready - now);
  }
  return Permit(std::move(slot), std::move(lock));
}

std::shared_ptr<HostRateLimiter> HostRateLimiter::global() {
  static auto limiter = std::make_shared<HostRateLimiter>();
  return limiter;
}

std::string ParsedUrl::origin() const {
  return scheme + "://" + host + ":" + std::to_string(port);
}

ParsedUrl parse_url(const std::string& url) {
  ParsedUrl out;
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ParseError("not an absolute URL: " + url);
  out.scheme = to_lower_ascii(url.substr(0, scheme_end));
  if (out.scheme != "http" && out.scheme != "https") {
    throw ParseError("unsupported URL scheme: " + out.scheme);
  }
  auto rest = url.substr(scheme_end + 3);
  auto path_start = rest.find_first_of("/?");
  std::string authority = rest.substr(0, path_start);
  out.path_and_query = path_start == std::string::npos ? "/" : rest.substr(path_start);
  if (out.path_and_query.front() == '?') out.path_and_query.insert(0, "/");
  auto colon = authority.rfind(':');
  if (colon != std::string::npos && authority.find(']') == std::string::npos) {
    out.host = authority.substr(0, colon);
    try {
      out.port = std::stoi(authority.substr(colon + 1));
    } catch (const std::exception&) {
      throw ParseError("bad port in URL: " + url);
    }
  } else {
    out.host = authority;
    out.port = out.scheme == "https" ? 443 : 80;
  }
  if (out.host.empty()) throw ParseError("URL has no host: " + url);
  return out;
}

HttpClient::HttpClient(HttpPolicy policy, std::shared_ptr<HostRateLimiter> limiter)
    : policy_(std::move(policy)), limiter_(std::move(limiter)) {}

template <typename Send>
HttpResponse HttpClient::with_retries(const ParsedUrl& url, Send&& send) const {
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (url.scheme == "https") {
    throw TransportError("https is not supported by this build: " + url.host, -1);
  }
#endif
  int last_status = -1;
  std::string last_error;
  auto backoff = policy_.backoff;
  const int attempts = 1 + std::max(0, policy_.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Result result = [&] {
      auto permit = limiter_->acquire(url.host + ":" + std::to_string(url.port), policy_.host_delay);
      httplib::Client client(url.origin());
      client.set_connection_timeout(policy_.timeout);
      client.set_read_timeout(policy_.timeout);
      client.set_follow_location(true);
      return send(client);
    }();
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    last_status = result->status;
    if (result->status == 429 || result->status >= 500) {
      last_error = "HTTP " + std::to_string(result->status);
      continue;
    }
    return HttpResponse{result->status, result->body};
  }
  throw TransportError("request to " + url.host + url.path_and_query + " failed after " +
                           std::to_string(attempts) + " attempts: " + last_error,
                       last_status);
}

HttpResponse HttpClient::get(const std::string& url) const {
  ParsedUrl parsed = parse_url(url);
  httplib::Headers headers{{"User-Agent", policy_.user_agent}};
  return with_retries(parsed, [&](httplib::Client& client) {
    return client.Get(parsed.path_and_query, headers);
  });
}

HttpResponse HttpClient::post_form(
    const std::string& url, const std::vector<std::pair<std::string, std::string>>& fields) const {
  ParsedUrl parsed = parse_url(url);
  httplib::Headers headers{{"User-Agent", policy_.user_agent}};
  httplib::Params params;
  for (const auto& [k, v] : fields) params.emplace(k, v);
  return with_retries(parsed, [&](httplib::Client& client) {
    return client.Post(parsed.path_and_query, headers, params);
  });
}

}  // namespace editwire
