#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "editwire/graph_store.hpp"
#include "editwire/http.hpp"
#include "editwire/ingest.hpp"
#include "editwire/ranker.hpp"

namespace editwire {

enum class SelectionMode { any, all };

/// Criteria for the edits that feed a news text: written by a top editor,
/// written by a category expert, or longer than `min_chars`.
struct EditSelectionRule {
  std::size_t min_chars = 50;
  std::size_t top_editor_k = 50;
  std::size_t expert_k = 5;
  SelectionMode mode = SelectionMode::any;
};

enum class SummarizerKind { local, remote };

struct SummarizerSpec {
  SummarizerKind kind = SummarizerKind::local;
  std::size_t sentence_limit = 7;
  std::string endpoint;  // remote only
  std::string api_key;   // remote only
};

class EmptyAggregateError : public Error {
 public:
  using Error::Error;
};

/// Keeps edits matching the rule, preserving order. The length criterion is
/// strict: an edit qualifies with more than `min_chars` characters.
std::vector<EditRecord> select_edits(const std::vector<EditRecord>& edits,
                                     const EditSelectionRule& rule,
                                     const std::set<std::string>& top_editors,
                                     const std::set<std::string>& experts);

/// Cleaned added text of every edit, oldest first, joined by blank lines.
/// Edits whose cleaned text is empty are skipped. Throws EmptyAggregateError
/// when nothing remains.
std::string aggregate_text(const std::vector<EditRecord>& edits);

/// Extractive summary. Sentences are scored by the summed document frequency
/// of their non-stopword tokens divided by their token count; the best
/// `sentence_limit` are returned in original order, joined by single spaces.
/// Text with at most `sentence_limit` sentences is returned unchanged.
std::string summarize_local(const std::string& text, std::size_t sentence_limit);

struct SummaryResult {
  std::string text;
  /// Set when the remote summarizer failed and the local one was used.
  std::optional<std::string> fallback_reason;
};

/// Summarizes with the configured summarizer, falling back to the local one
/// when the remote call fails or returns nothing.
SummaryResult summarize(const std::string& text, const SummarizerSpec& spec,
                        const HttpClient& http = HttpClient{});

/// Throws ProviderError on any remote failure. Uses the SMMRY request shape:
/// SM_API_KEY and SM_LENGTH query parameters, text in the sm_api_input form
/// field, summary in sm_api_content.
std::string summarize_remote(const std::string& text, const SummarizerSpec& spec,
                             const HttpClient& http);

/// "n<page_id>-<generated_at as YYYYMMDDTHHMMSSZ>"
std::string make_item_id(PageId page_id, Instant generated_at);

/// Assembles a NewsItem for a selected page. Throws PreconditionError when
/// the decision is not selected or the summary is empty; IntegrityError when
/// the result violates a NewsItem invariant.
NewsItem build_news_item(PageId page_id, const WorkingSetPage& page,
                         const SelectionDecision& decision, const RankConfig& cfg,
                         const std::string& summary, const std::vector<EditRecord>& edits_used,
                         Instant now);

}  // namespace editwire
