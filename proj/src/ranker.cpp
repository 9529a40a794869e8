#include "editwire/ranker.hpp"

#include <algorithm>
#include <cmath>

namespace editwire {

namespace {

double ratio(std::int64_t num, std::int64_t den) {
  if (den <= 0) return 0.0;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

double rank_authors_with_news(const RankInputs& in) {
  return ratio(in.news_gen_authors_on_page, in.news_gen_authors_total);
}

double rank_common_authors(const RankInputs& in) {
  return ratio(in.authors_on_page, in.authors_total);
}

double rank_domain_experts(const RankInputs& in) {
  return ratio(in.domain_expert_authors_on_page, in.authors_total);
}

double rank_recent_changes(const RankInputs& in) {
  if (in.mean_edits_per_page_in_set <= 0.0) return 0.0;
  return static_cast<double>(in.edits_of_page_in_set) / in.mean_edits_per_page_in_set;
}

double rank_relevance(const RankInputs& in) {
  return ratio(in.views_yesterday, in.views_last_30_days_total);
}

RankRegistry RankRegistry::with_defaults() {
  RankRegistry r;
  r.add(rank_names::kAuthorsWithNews, rank_authors_with_news);
  r.add(rank_names::kCommonAuthors, rank_common_authors);
  r.add(rank_names::kDomainExperts, rank_domain_experts);
  r.add(rank_names::kRecentChanges, rank_recent_changes);
  r.add(rank_names::kRelevance, rank_relevance);
  return r;
}

void RankRegistry::add(std::string name, RankFunction fn) { ranks_[std::move(name)] = std::move(fn); }

double RankRegistry::evaluate(const std::string& name, const RankInputs& in) const {
  auto it = ranks_.find(name);
  if (it == ranks_.end()) throw ConfigError("unknown rank '" + name + "'");
  return it->second(in);
}

std::vector<std::string> RankRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, fn] : ranks_) out.push_back(name);
  return out;
}

RankConfig RankConfig::defaults() {
  RankConfig cfg;
  cfg.enabled = {rank_names::kAuthorsWithNews, rank_names::kCommonAuthors,
                 rank_names::kDomainExperts, rank_names::kRecentChanges, rank_names::kRelevance};
  for (const auto& name : cfg.enabled) cfg.weights[name] = 1.0;
  cfg.threshold = 1.0;
  return cfg;
}

void RankConfig::validate() const {
  if (!std::isfinite(threshold)) throw ConfigError("rank threshold must be finite");
  for (const auto& name : enabled) {
    auto it = weights.find(name);
    if (it == weights.end()) throw ConfigError("enabled rank '" + name + "' has no weight");
    if (!std::isfinite(it->second) || it->second < 0.0) {
      throw ConfigError("weight of rank '" + name + "' must be finite and >= 0");
    }
  }
}

SelectionDecision combine(const std::map<std::string, double>& values, const RankConfig& cfg,
                          PageId page_id) {
  SelectionDecision d;
  d.page_id = page_id;
  for (const auto& name : cfg.enabled) {
    auto v = values.find(name);
    if (v == values.end()) throw ConfigError("no value for enabled rank '" + name + "'");
    auto w = cfg.weights.find(name);
    if (w == cfg.weights.end()) throw ConfigError("enabled rank '" + name + "' has no weight");
    d.rank_values[name] = v->second;
    d.weighted_total += v->second * w->second;
  }
  d.selected = d.weighted_total > cfg.threshold;
  return d;
}

std::vector<SelectionDecision> select_news_pages(const WorkingSet& ws, const RankConfig& cfg,
                                                 const std::map<PageId, PageViewStats>& stats,
                                                 const GraphStore& store,
                                                 const RankRegistry& registry) {
  cfg.validate();
  std::vector<SelectionDecision> out;
  for (const auto& [page_id, page] : ws.pages) {
    auto s = stats.find(page_id);
    const PageViewStats view_stats =
        s != stats.end() ? s->second : PageViewStats::zeros(page.title);
    RankInputs in = store.gather_rank_inputs(page_id, ws, view_stats);
    std::map<std::string, double> values;
    for (const auto& name : cfg.enabled) values[name] = registry.evaluate(name, in);
    SelectionDecision d = combine(values, cfg, page_id);
    if (d.selected) out.push_back(std::move(d));
  }
  std::stable_sort(out.begin(), out.end(), [](const SelectionDecision& a, const SelectionDecision& b) {
    if (a.weighted_total != b.weighted_total) return a.weighted_total > b.weighted_total;
    return a.page_id < b.page_id;
  });
  return out;
}

}  // namespace editwire
