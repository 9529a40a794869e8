#include "editwire/http.hpp"

#include <gtest/gtest.h>

#include <atomic>

#include "editwire/common.hpp"
#include "test_support.hpp"

using namespace editwire;
using editwire::testing::FakeServer;

namespace {

HttpPolicy fast_policy() {
  HttpPolicy p;
  p.host_delay = Milliseconds{0};
  p.backoff = Milliseconds{1};
  p.max_retries = 3;
  p.timeout = std::chrono::seconds{5};
  return p;
}

}  // namespace

TEST(ParseUrl, SplitsParts) {
  auto u = parse_url("https://en.wikipedia.org/w/api.php?action=query");
  EXPECT_EQ(u.scheme, "https");
  EXPECT_EQ(u.host, "en.wikipedia.org");
  EXPECT_EQ(u.port, 443);
  EXPECT_EQ(u.path_and_query, "/w/api.php?action=query");
  auto v = parse_url("http://127.0.0.1:8080");
  EXPECT_EQ(v.port, 8080);
  EXPECT_EQ(v.path_and_query, "/");
  EXPECT_THROW(parse_url("ftp://x"), ParseError);
  EXPECT_THROW(parse_url("/relative"), ParseError);
}

TEST(HttpClient, RetriesServerErrorsThenSucceeds) {
  FakeServer server;
  std::atomic<int> calls{0};
  server.http().Get("/flaky", [&](const httplib::Request&, httplib::Response& res) {
    if (++calls < 3) {
      res.status = 503;
      return;
    }
    res.set_content("ok", "text/plain");
  });
  server.start();
  HttpClient client(fast_policy(), std::make_shared<HostRateLimiter>());
  auto r = client.get(server.url("/flaky"));
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, "ok");
  EXPECT_EQ(calls.load(), 3);
}

TEST(HttpClient, GivesUpWithLastStatus) {
  FakeServer server;
  std::atomic<int> calls{0};
  server.http().Get("/down", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 429;
  });
  server.start();
  HttpClient client(fast_policy(), std::make_shared<HostRateLimiter>());
  try {
    client.get(server.url("/down"));
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_EQ(e.last_status(), 429);
  }
  EXPECT_EQ(calls.load(), 4);  // first attempt plus three retries
}

TEST(HttpClient, ClientErrorsAreReturnedNotRetried) {
  FakeServer server;
  std::atomic<int> calls{0};
  server.http().Get("/missing", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 404;
  });
  server.start();
  HttpClient client(fast_policy(), std::make_shared<HostRateLimiter>());
  EXPECT_EQ(client.get(server.url("/missing")).status, 404);
  EXPECT_EQ(calls.load(), 1);
}

TEST(HttpClient, ConnectionRefusedIsTransportError) {
  int port;
  {
    FakeServer probe;
    probe.start();
    port = probe.port();
  }
  HttpPolicy p = fast_policy();
  p.max_retries = 1;
  HttpClient client(p, std::make_shared<HostRateLimiter>());
  try {
    client.get("http://127.0.0.1:" + std::to_string(port) + "/");
    FAIL() << "expected TransportError";
  } catch (const TransportError& e) {
    EXPECT_EQ(e.last_status(), -1);
  }
}

TEST(HttpClient, PostsFormFields) {
  FakeServer server;
  std::string got;
  server.http().Post("/form", [&](const httplib::Request& req, httplib::Response& res) {
    got = req.get_param_value("sm_api_input");
    res.set_content("{}", "application/json");
  });
  server.start();
  HttpClient client(fast_policy(), std::make_shared<HostRateLimiter>());
  EXPECT_EQ(client.post_form(server.url("/form"), {{"sm_api_input", "a & b = c"}}).status, 200);
  EXPECT_EQ(got, "a & b = c");
}

TEST(HostRateLimiter, SpacesRequestsToTheSameHost) {
  HostRateLimiter limiter;
  auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 3; ++i) {
    auto permit = limiter.acquire("example.org", Milliseconds{40});
  }
  auto elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_GE(elapsed, Milliseconds{80});

  // another host is not held back by example.org
  auto other_start = std::chrono::steady_clock::now();
  { auto permit = limiter.acquire("other.example", Milliseconds{40}); }
  EXPECT_LT(std::chrono::steady_clock::now() - other_start, Milliseconds{30});
}
