// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed here and nowhere else.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "editwire/benchmark.hpp"
#include "editwire/config.hpp"
#include "editwire/feed_json.hpp"
#include "editwire/news_builder.hpp"
#include "editwire/pipeline.hpp"
#include "editwire/ranker.hpp"
#include "test_support.hpp"

using namespace editwire;
using namespace editwire::testing;
using namespace std::chrono_literals;

namespace {

constexpr double kRankTolerance = 1e-12;
constexpr auto kGraphBudget = 5s;
constexpr auto kReplayBudget = 30s;
constexpr int kPropertyCases = 1000;

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

int failures = 0;

void criterion(int n, const std::string& name, const std::function<std::string()>& body) {
  std::string detail;
  bool ok = true;
  try {
    detail = body();
  } catch (const Failure& f) {
    ok = false;
    detail = f.why;
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  if (!ok) ++failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << name;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
}

double ratio(std::int64_t a, std::int64_t b) { return b > 0 ? double(a) / double(b) : 0.0; }

std::string fixture_replay(const std::filesystem::path& store_path) {
  Config c = load_config(data_path("fixture_config.json"));
  c.storage_path = store_path;
  c.ingest.stream_path = data_path("fixture_stream.jsonl");
  GraphStore store(c.storage_path, c.store_options());
  Pipeline(c, pinned_clock(at("2026-05-20T22:41:00Z"))).run(store);
  return export_feed(store);
}

std::set<std::string> random_set(std::mt19937_64& rng) {
  std::set<std::string> out;
  std::size_t n = rng() % 9;
  for (std::size_t i = 0; i < n; ++i) out.insert("w" + std::to_string(rng() % 14));
  return out;
}

std::vector<FeedStory> load_feed(const std::string& name, const std::string& source) {
  auto stories = parse_feed(read_file(data_path(name)), source).stories;
  assign_keywords(stories);
  return stories;
}

}  // namespace

int main() {
  criterion(1, "authorgraph counts and ranks agree with brute force on G1", [] {
    auto t0 = std::chrono::steady_clock::now();
    GraphStore store(":memory:");
    G1 g = make_g1();
    load_g1(store, g);
    std::map<PageId, PageViewStats> stats;
    for (const auto& [page, wp] : g.ws.pages) {
      PageViewStats s = PageViewStats::zeros(wp.title, false);
      s.views_yesterday = 10 * page;
      s.views_last_30_days_total = 300 + 10 * page;
      stats[page] = s;
    }
    RankRegistry registry = RankRegistry::with_defaults();
    for (const auto& [page, wp] : g.ws.pages) {
      RankInputs got = store.gather_rank_inputs(page, g.ws, stats[page]);
      RankInputs want = brute_force_inputs(page, g.edits, {g.news}, g.ws, stats[page]);
      require(got == want, "rank inputs differ on page " + std::to_string(page));
      const std::map<std::string, double> expected = {
          {"authors_with_news", ratio(want.news_gen_authors_on_page, want.news_gen_authors_total)},
          {"common_authors", ratio(want.authors_on_page, want.authors_total)},
          {"domain_experts", ratio(want.domain_expert_authors_on_page, want.authors_total)},
          {"recent_changes", double(want.edits_of_page_in_set) / want.mean_edits_per_page_in_set},
          {"relevance", ratio(want.views_yesterday, want.views_last_30_days_total)},
      };
      for (const auto& [name, value] : expected) {
        double v = registry.evaluate(name, got);
        require(std::abs(v - value) <= kRankTolerance,
                name + " on page " + std::to_string(page) + " is " + std::to_string(v));
      }
    }
    auto elapsed = std::chrono::steady_clock::now() - t0;
    require(elapsed < kGraphBudget, "too slow");
    return std::to_string(g.ws.pages.size()) + " pages, all fields exact";
  });

  criterion(2, "weighted selection is monotone, weight-0 neutral and scale invariant", [] {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    const auto names = RankConfig::defaults().enabled;
    for (int i = 0; i < kPropertyCases; ++i) {
      RankConfig cfg = RankConfig::defaults();
      std::map<std::string, double> v;
      for (const auto& n : names) {
        v[n] = unit(rng) * (n == "recent_changes" ? 4.0 : 1.0);
        cfg.weights[n] = rng() % 4 == 0 ? 0.0 : 3.0 * unit(rng);
      }
      cfg.threshold = 4.0 * unit(rng);
      auto base = combine(v, cfg);
      auto up = v;
      up[names[rng() % names.size()]] += unit(rng);
      require(!base.selected || combine(up, cfg).selected, "monotonicity, case " + std::to_string(i));
      for (const auto& n : names) {
        if (cfg.weights[n] != 0.0) continue;
        auto changed = v;
        changed[n] = 100.0 * unit(rng);
        auto d = combine(changed, cfg);
        require(d.weighted_total == base.weighted_total && d.selected == base.selected,
                "weight-0 rank changed the result, case " + std::to_string(i));
      }
      double c = scale(rng);
      RankConfig scaled = cfg;
      for (auto& [n, w] : scaled.weights) w *= c;
      scaled.threshold *= c;
      require(combine(v, scaled).selected == base.selected, "scale, case " + std::to_string(i));
    }
    return std::to_string(kPropertyCases) + " random cases";
  });

  criterion(3, "edit length rule and match thresholds flip at their boundaries", [] {
    EditSelectionRule rule;
    auto e50 = make_edit(1, 1, "P", "nobody", "2026-05-20T10:00:00Z", std::string(50, 'a'));
    auto e51 = make_edit(2, 1, "P", "nobody", "2026-05-20T10:00:00Z", std::string(51, 'a'));
    require(select_edits({e50}, rule, {}, {}).empty(), "50-char edit selected");
    require(select_edits({e51}, rule, {}, {}).size() == 1, "51-char edit not selected");
    require(classify_match(0.24) == MatchClass::none, "0.24 not none");
    require(classify_match(0.28) == MatchClass::weak, "0.28 not weak");
    require(classify_match(0.40) == MatchClass::strong, "0.40 not strong");
    require(classify_match(std::nextafter(0.25, 0.0)) == MatchClass::none &&
                classify_match(0.25) == MatchClass::weak,
            "no flip at 0.25");
    require(classify_match(0.33) == MatchClass::weak &&
                classify_match(std::nextafter(0.33, 1.0)) == MatchClass::strong,
            "no flip at 0.33");
    return "";
  });

  criterion(4, "match strength is symmetric, bounded and reflexive", [] {
    std::mt19937_64 rng(77);
    for (int i = 0; i < kPropertyCases; ++i) {
      auto a = random_set(rng);
      auto b = random_set(rng);
      double s = match_strength(a, b);
      require(s == match_strength(b, a), "asymmetric, case " + std::to_string(i));
      require(s >= 0.0 && s <= 1.0, "out of range, case " + std::to_string(i));
      require(a.empty() || match_strength(a, a) == 1.0, "identity, case " + std::to_string(i));
    }
    std::set<std::string> a = {"k1", "k2", "k3", "k4"};
    std::set<std::string> b = {"k1", "k2", "k3", "k5", "k6"};
    require(match_strength(a, b) == 0.5, "3 shared of 6 is not 0.5");
    return std::to_string(kPropertyCases) + " random pairs";
  });

  criterion(5, "fixture replay is deterministic and equals the reference feed", [] {
    auto t0 = std::chrono::steady_clock::now();
    TempDir dir;
    std::string a = fixture_replay(dir / "a.db");
    std::string b = fixture_replay(dir / "b.db");
    auto elapsed = std::chrono::steady_clock::now() - t0;
    require(a == b, "two replays differ");
    require(a == read_file(data_path("golden_export.json")), "replay differs from golden_export.json");
    require(elapsed < kReplayBudget, "too slow");
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    return std::to_string(a.size()) + " bytes, " + std::to_string(ms) + " ms for two runs";
  });

  criterion(6, "an update seven minutes later refreshes the existing item", [] {
    TempDir dir;
    Config c = load_config(data_path("fixture_config.json"));
    c.storage_path = dir / "s.db";
    c.ingest.stream_path = data_path("fixture_stream.jsonl");
    GraphStore store(c.storage_path, c.store_options());
    const Instant t0 = at("2026-05-20T22:41:00Z");
    Pipeline(c, pinned_clock(t0)).run(store);
    c.ingest.stream_path = data_path("fixture_update.jsonl");
    RunReport r = Pipeline(c, pinned_clock(t0 + 7min)).run(store);
    require(r.news_created == 0 && r.news_updated == 1,
            "created " + std::to_string(r.news_created) + ", updated " +
                std::to_string(r.news_updated));
    std::size_t for_page = 0;
    for (const auto& n : store.list_news()) {
      if (n.page_id != 101) continue;
      ++for_page;
      require(n.generated_at == t0, "generated_at moved");
      require(n.updated_at == t0 + 7min && n.updated_at > n.generated_at, "updated_at not advanced");
    }
    require(for_page == 1, std::to_string(for_page) + " items for page 101");
    return "updated_at 22:48 > 22:41";
  });

  criterion(7, "fixture feeds overlap 40% / 40% on exactly the planted pairs", [] {
    auto report = compute_overlap(load_feed("wire_feed.xml", "wire"), load_feed("wiki_feed.xml", "wiki"));
    require(report.overlap_pct_left == 40.0 && report.overlap_pct_right == 40.0,
            std::to_string(report.overlap_pct_left) + "/" + std::to_string(report.overlap_pct_right));
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& p : report.pairs) got.insert({p.left.story_id, p.right.story_id});
    const std::set<std::pair<std::string, std::string>> planted = {
        {"wire-03", "urn:wiki:page:101"},
        {"wire-05", "urn:wiki:page:104"},
        {"wire-08", "urn:wiki:page:5008"},
        {"wire-10", "urn:wiki:page:5004"},
    };
    require(got == planted, "pairs differ from the planted ones");
    return "4 strong pairs";
  });

  criterion(8, "freshness delta is exact", [] {
    MatchPair p;
    p.left.published_at = at("2026-05-20T10:00:00Z");
    p.right.published_at = at("2026-05-20T12:00:00Z");
    p.time_delta = p.right.published_at - p.left.published_at;
    auto f = freshness_report({p});
    require(f.deltas.size() == 1 && f.deltas[0] == Seconds{7200}, "delta is not +7200 s");
    require(f.mean_seconds == 7200.0 && f.left_first == 1, "summary wrong");
    return "+2 h";
  });

  std::cout << "NOT REPRODUCIBLE criterion 8: the published lead-time result for sports and "
               "entertainment stories needs months of live wiki and agency traffic; only the "
               "delta arithmetic is checked here"
            << std::endl;
  std::cout << "NOT REPRODUCIBLE criterion 8: deriving the 0.25 / 0.33 thresholds from live "
               "agency feed pairs needs licensed agency feeds; the thresholds are pinned "
               "constants here"
            << std::endl;

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(failures) + " FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
