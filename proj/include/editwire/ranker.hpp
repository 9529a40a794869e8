#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "editwire/graph_store.hpp"
#include "editwire/ingest.hpp"
#include "editwire/stats_provider.hpp"

namespace editwire {

namespace rank_names {
inline constexpr const char* kAuthorsWithNews = "authors_with_news";
inline constexpr const char* kCommonAuthors = "common_authors";
inline constexpr const char* kDomainExperts = "domain_experts";
inline constexpr const char* kRecentChanges = "recent_changes";
inline constexpr const char* kRelevance = "relevance";
}  // namespace rank_names

/// Share of all news-generating authors who edited the page. 0 when there
/// are none.
double rank_authors_with_news(const RankInputs& in);
/// Share of all known authors who edited the page.
double rank_common_authors(const RankInputs& in);
/// Share of all known authors who edited the page and another page with a
/// common category.
double rank_domain_experts(const RankInputs& in);
/// Page edits in the working set relative to the mean per page. May exceed 1.
double rank_recent_changes(const RankInputs& in);
/// Yesterday's views relative to the 30-day total.
double rank_relevance(const RankInputs& in);

using RankFunction = std::function<double(const RankInputs&)>;

/// Named rank functions. New ranks are added by registering them and naming
/// them in RankConfig::enabled.
class RankRegistry {
 public:
  /// Registry holding the five built-in ranks.
  static RankRegistry with_defaults();

  void add(std::string name, RankFunction fn);
  bool contains(const std::string& name) const { return ranks_.contains(name); }
  double evaluate(const std::string& name, const RankInputs& in) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, RankFunction> ranks_;
};

struct RankConfig {
  std::map<std::string, double> weights;
  double threshold = 1.0;
  /// Ranks summed, in this order.
  std::vector<std::string> enabled;

  /// All five built-in ranks with weight 1 and threshold 1.
  static RankConfig defaults();
  /// Throws ConfigError when an enabled rank lacks a weight, a weight is
  /// negative or non-finite, or the threshold is not finite.
  void validate() const;
};

struct SelectionDecision {
  PageId page_id = 0;
  std::map<std::string, double> rank_values;
  double weighted_total = 0.0;
  bool selected = false;
};

/// Weighted sum over the enabled ranks; selected iff the sum strictly exceeds
/// the threshold. Throws ConfigError when an enabled rank has no value.
SelectionDecision combine(const std::map<std::string, double>& values, const RankConfig& cfg,
                          PageId page_id = 0);

/// Ranks every page of `ws` (which must already be ingested into `store`) and
/// returns the selected decisions, highest total first, ties by page id.
/// Pages absent from `stats` are ranked with zero views.
std::vector<SelectionDecision> select_news_pages(const WorkingSet& ws, const RankConfig& cfg,
                                                 const std::map<PageId, PageViewStats>& stats,
                                                 const GraphStore& store,
                                                 const RankRegistry& registry =
                                                     RankRegistry::with_defaults());

}  // namespace editwire
