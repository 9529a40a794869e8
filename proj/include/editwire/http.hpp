#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace editwire {

using Milliseconds = std::chrono::milliseconds;

struct HttpPolicy {
  Milliseconds host_delay{200};
  int max_retries = 3;
  Milliseconds backoff{500};  // doubled after every failed attempt
  std::chrono::seconds timeout{30};
  std::string user_agent = "editwire/1.0";
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

struct ParsedUrl {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path_and_query;  // always starts with '/'

  std::string origin() const;
};

/// Throws ParseError on anything that is not an absolute http(s) URL.
ParsedUrl parse_url(const std::string& url);

/// Serializes one request per remote host and spaces consecutive requests to
/// the same host by at least `delay`.
class HostRateLimiter {
 public:
  class Permit {
   public:
    Permit(Permit&&) = default;
    ~Permit();

   private:
    friend class HostRateLimiter;
    struct Slot;
    Permit(std::shared_ptr<Slot> slot, std::unique_lock<std::mutex> lock)
        : slot_(std::move(slot)), lock_(std::move(lock)) {}
    std::shared_ptr<Slot> slot_;
    std::unique_lock<std::mutex> lock_;
  };

  Permit acquire(const std::string& host, Milliseconds delay);

  /// Process-wide limiter shared by every client that does not bring its own.
  static std::shared_ptr<HostRateLimiter> global();

 private:
  std::mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Permit::Slot>> slots_;
};

/// Blocking HTTP client with per-host rate limiting and bounded retries.
/// Connection failures, 429 and 5xx responses are retried with exponential
/// backoff; any other response is returned to the caller as-is.
class HttpClient {
 public:
  explicit HttpClient(HttpPolicy policy = {},
                      std::shared_ptr<HostRateLimiter> limiter = HostRateLimiter::global());

  HttpResponse get(const std::string& url) const;
  HttpResponse post_form(const std::string& url,
                         const std::vector<std::pair<std::string, std::string>>& fields) const;

  const HttpPolicy& policy() const { return policy_; }

 private:
  template <typename Send>
  HttpResponse with_retries(const ParsedUrl& url, Send&& send) const;

  HttpPolicy policy_;
  std::shared_ptr<HostRateLimiter> limiter_;
};

}  // namespace editwire
