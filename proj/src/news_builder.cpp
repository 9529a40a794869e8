#include "editwire/news_builder.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "editwire/text.hpp"
#include "json.hpp"

namespace editwire {

std::vector<EditRecord> select_edits(const std::vector<EditRecord>& edits,
                                     const EditSelectionRule& rule,
                                     const std::set<std::string>& top_editors,
                                     const std::set<std::string>& experts) {
  std::vector<EditRecord> out;
  for (const auto& e : edits) {
    const bool by_top_editor = top_editors.contains(e.author);
    const bool by_expert = experts.contains(e.author);
    const bool long_enough = e.added_char_count > rule.min_chars;
    const bool keep = rule.mode == SelectionMode::any
                          ? (by_top_editor || by_expert || long_enough)
                          : (by_top_editor && by_expert && long_enough);
    if (keep) out.push_back(e);
  }
  return out;
}

std::string aggregate_text(const std::vector<EditRecord>& edits) {
  std::vector<const EditRecord*> ordered;
  for (const auto& e : edits) ordered.push_back(&e);
  std::stable_sort(ordered.begin(), ordered.end(), [](const EditRecord* a, const EditRecord* b) {
    return a->timestamp < b->timestamp;
  });
  std::string out;
  for (const EditRecord* e : ordered) {
    std::string cleaned = clean_wikitext(e->added_text);
    if (cleaned.empty()) continue;
    if (!out.empty()) out += "\n\n";
    out += cleaned;
  }
  if (out.empty()) throw EmptyAggregateError("no edit text to aggregate");
  return out;
}

std::string summarize_local(const std::string& text, std::size_t sentence_limit) {
  if (sentence_limit == 0) throw PreconditionError("sentence_limit must be >= 1");
  std::vector<std::string> sentences = split_sentences(text);
  if (sentences.size() <= sentence_limit) return text;

  const auto& stopwords = default_stopwords();
  std::vector<std::vector<std::string>> tokens;
  std::map<std::string, std::int64_t> frequency;
  for (const auto& s : sentences) {
    tokens.push_back(tokenize(s));
    for (const auto& t : tokens.back()) {
      if (!stopwords.contains(t)) ++frequency[t];
    }
  }

  // Scores are kept as exact fractions so ties are decided by position, not
  // by rounding.
  struct Score {
    std::int64_t num = 0;
    std::int64_t den = 1;
  };
  std::vector<Score> scores(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (tokens[i].empty()) continue;
    std::int64_t sum = 0;
    for (const auto& t : tokens[i]) {
      if (auto it = frequency.find(t); it != frequency.end()) sum += it->second;
    }
    scores[i] = {sum, static_cast<std::int64_t>(tokens[i].size())};
  }

  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a].num * scores[b].den > scores[b].num * scores[a].den;
  });
  order.resize(sentence_limit);
  std::sort(order.begin(), order.end());

  std::string out;
  for (std::size_t i : order) {
    if (!out.empty()) out += ' ';
    out += sentences[i];
  }
  return out;
}

std::string summarize_remote(const std::string& text, const SummarizerSpec& spec,
                             const HttpClient& http) {
  if (spec.endpoint.empty()) throw ProviderError("remote summarizer endpoint not configured");
  std::string url = spec.endpoint;
  url += url.find('?') == std::string::npos ? '?' : '&';
  url += "SM_API_KEY=" + url_encode(spec.api_key) +
         "&SM_LENGTH=" + std::to_string(spec.sentence_limit);
  HttpResponse response;
  try {
    response = http.post_form(url, {{"sm_api_input", text}});
  } catch (const Error& e) {
    throw ProviderError(std::string("remote summarizer unreachable: ") + e.what());
  }
  if (response.status != 200) {
    throw ProviderError("remote summarizer returned HTTP " + std::to_string(response.status));
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(response.body);
  } catch (const nlohmann::json::parse_error&) {
    throw ProviderError("remote summarizer returned invalid JSON");
  }
  if (doc.contains("sm_api_error")) {
    throw ProviderError("remote summarizer error: " + doc.value("sm_api_message", std::string("?")));
  }
  auto it = doc.find("sm_api_content");
  if (it == doc.end() || !it->is_string() || trim(it->get<std::string>()).empty()) {
    throw ProviderError("remote summarizer returned no summary");
  }
  return trim(it->get<std::string>());
}

SummaryResult summarize(const std::string& text, const SummarizerSpec& spec,
                        const HttpClient& http) {
  if (trim(text).empty()) throw PreconditionError("cannot summarize empty text");
  if (spec.sentence_limit == 0) throw PreconditionError("sentence_limit must be >= 1");
  SummaryResult result;
  if (spec.kind == SummarizerKind::remote) {
    // Short texts need no summarizing, remote or not.
    if (split_sentences(text).size() <= spec.sentence_limit) {
      result.text = text;
      return result;
    }
    try {
      result.text = summarize_remote(text, spec, http);
      return result;
    } catch (const ProviderError& e) {
      result.fallback_reason = e.what();
    }
  }
  result.text = summarize_local(text, spec.sentence_limit);
  return result;
}

std::string make_item_id(PageId page_id, Instant generated_at) {
  return "n" + std::to_string(page_id) + "-" + format_compact(generated_at);
}

NewsItem build_news_item(PageId page_id, const WorkingSetPage& page,
                         const SelectionDecision& decision, const RankConfig& cfg,
                         const std::string& summary, const std::vector<EditRecord>& edits_used,
                         Instant now) {
  if (!decision.selected) throw PreconditionError("page was not selected for news");
  if (decision.page_id != page_id) throw PreconditionError("decision belongs to another page");
  if (trim(summary).empty()) throw PreconditionError("summary is empty");

  NewsItem item;
  item.item_id = make_item_id(page_id, now);
  item.page_id = page_id;
  item.title = page.title;
  item.summary = summary;
  item.categories.assign(page.categories.begin(), page.categories.end());
  item.generated_at = now;
  item.updated_at = now;
  for (const auto& e : edits_used) {
    if (e.page_id != page_id) {
      throw IntegrityError("edit " + std::to_string(e.revision_id) + " belongs to another page");
    }
    item.source_revision_ids.push_back(e.revision_id);
  }
  item.final_rank = decision.weighted_total;
  for (const auto& name : cfg.enabled) {
    auto v = decision.rank_values.find(name);
    auto w = cfg.weights.find(name);
    if (v == decision.rank_values.end() || w == cfg.weights.end()) {
      throw IntegrityError("rank '" + name + "' missing from the decision");
    }
    item.rank_breakdown[name] = {v->second, w->second};
  }
  validate_news_item(item);
  return item;
}

}  // namespace editwire
