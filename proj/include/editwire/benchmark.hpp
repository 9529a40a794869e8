#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "editwire/common.hpp"
#include "editwire/http.hpp"
#include "editwire/text.hpp"

namespace editwire {

/// One story of a news feed snapshot.
struct FeedStory {
  std::string source_name;
  std::string story_id;
  std::string title;
  std::string body;
  Instant published_at{};
  std::set<std::string> keywords;

  bool operator==(const FeedStory&) const = default;
};

struct FeedParseResult {
  std::vector<FeedStory> stories;
  std::size_t dropped_undated = 0;
  std::size_t dropped_duplicates = 0;
};

/// Parses RSS 2.0, Atom, or the engine's own feed JSON (detected from the
/// document). A whitespace-only document is an empty feed. Throws ParseError
/// on anything else it cannot read.
FeedParseResult parse_feed(std::string_view document, const std::string& source_name);

/// Reads a feed from an http(s) URL or a file path.
FeedParseResult fetch_feed(const std::string& source, const HttpClient& http = HttpClient{});

using StopwordSet = std::set<std::string, std::less<>>;

/// Top `n` non-stopword tokens by frequency, ties broken alphabetically.
std::set<std::string> extract_keywords(std::string_view text, std::size_t n = 10,
                                       const StopwordSet& stopwords = default_stopwords());

/// Fills `keywords` of every story from its title and body.
void assign_keywords(std::vector<FeedStory>& stories, std::size_t n = 10);

/// Keywords from a remote SMMRY-style service (SM_KEYWORD_COUNT, response
/// field sm_api_keyword_array). Falls back to extract_keywords on failure.
std::set<std::string> extract_keywords_remote(std::string_view text, std::size_t n,
                                              const std::string& endpoint,
                                              const std::string& api_key,
                                              const HttpClient& http = HttpClient{});

enum class MatchDenominator {
  union_of_sets,  // |A ∩ B| / |A ∪ B|
  smaller_set,    // |A ∩ B| / min(|A|, |B|)
};

/// Keyword overlap in [0, 1]; 0 when both sets are empty.
double match_strength(const std::set<std::string>& a, const std::set<std::string>& b,
                      MatchDenominator denominator = MatchDenominator::union_of_sets);

enum class MatchClass { none = 0, weak = 1, strong = 2 };

std::string_view to_string(MatchClass c);
MatchClass match_class_from_string(std::string_view s);

struct MatchThresholds {
  double minimum = 0.25;  // below: no match
  double strong = 0.33;   // above: strong match; [minimum, strong] is weak
};

MatchClass classify_match(double strength, const MatchThresholds& thresholds = {});

struct StoryRef {
  std::string source_name;
  std::string story_id;
  std::string title;
  Instant published_at{};

  bool operator==(const StoryRef&) const = default;
};

struct MatchPair {
  StoryRef left;
  StoryRef right;
  double strength = 0.0;
  MatchClass classification = MatchClass::none;
  /// right.published_at - left.published_at; positive when left came first.
  Seconds time_delta{0};
};

struct OverlapOptions {
  MatchClass min_class = MatchClass::strong;
  MatchThresholds thresholds;
  MatchDenominator denominator = MatchDenominator::union_of_sets;
};

struct OverlapReport {
  std::vector<MatchPair> pairs;  // by strength descending
  std::size_t left_count = 0;
  std::size_t right_count = 0;
  double overlap_pct_left = 0.0;   // matched left stories / left stories * 100
  double overlap_pct_right = 0.0;  // matched right stories / right stories * 100
};

/// Scores every cross pair and pairs stories one-to-one, greedily by
/// descending strength. Keywords must already be assigned.
OverlapReport compute_overlap(const std::vector<FeedStory>& left,
                              const std::vector<FeedStory>& right,
                              const OverlapOptions& options = {});

struct FreshnessSummary {
  std::vector<Seconds> deltas;
  double mean_seconds = 0.0;
  double median_seconds = 0.0;
  std::size_t left_first = 0;
  std::size_t right_first = 0;
  std::size_t simultaneous = 0;
};

FreshnessSummary freshness_report(const std::vector<MatchPair>& pairs);

/// Machine-readable benchmark report: overlap plus freshness.
std::string benchmark_report_json(const OverlapReport& overlap, const FreshnessSummary& freshness);

/// Plain-text table of the same report.
std::string benchmark_report_table(const OverlapReport& overlap,
                                   const FreshnessSummary& freshness);

}  // namespace editwire
