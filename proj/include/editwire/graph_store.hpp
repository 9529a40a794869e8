#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "editwire/common.hpp"
#include "editwire/ingest.hpp"
#include "editwire/stats_provider.hpp"

struct sqlite3;

namespace editwire {

struct AuthorRecord {
  std::string author_id;
  std::int64_t total_edit_count = 0;
  std::map<std::string, std::int64_t> per_category_edit_counts;
  /// True iff the author has an edit on a page with a persisted news item,
  /// made before that item was generated.
  bool news_generating = false;

  bool operator==(const AuthorRecord&) const = default;
};

/// Every count the page ranks consume, for one page of one working set.
struct RankInputs {
  PageId page_id = 0;
  std::int64_t news_gen_authors_on_page = 0;
  std::int64_t news_gen_authors_total = 0;
  std::int64_t authors_on_page = 0;
  std::int64_t authors_total = 0;
  /// Authors of the page who also edited a different page sharing at least
  /// one category with it.
  std::int64_t domain_expert_authors_on_page = 0;
  std::int64_t edits_of_page_in_set = 0;
  double mean_edits_per_page_in_set = 0.0;
  std::int64_t views_yesterday = 0;
  std::int64_t views_last_30_days_total = 0;

  bool operator==(const RankInputs&) const = default;
};

struct RankContribution {
  double value = 0.0;
  double weight = 0.0;

  bool operator==(const RankContribution&) const = default;
};

struct NewsItem {
  std::string item_id;
  PageId page_id = 0;
  std::string title;
  std::string summary;
  std::vector<std::string> categories;
  Instant generated_at{};
  Instant updated_at{};
  std::vector<RevisionId> source_revision_ids;
  double final_rank = 0.0;
  std::map<std::string, RankContribution> rank_breakdown;

  bool operator==(const NewsItem&) const = default;
};

/// Throws IntegrityError when a NewsItem invariant is violated (empty
/// provenance, updated_at < generated_at, final_rank not equal to the
/// weighted breakdown).
void validate_news_item(const NewsItem& item);

struct IngestStats {
  std::int64_t pages_added = 0;
  std::int64_t edits_added = 0;
  std::int64_t authors_added = 0;

  bool operator==(const IngestStats&) const = default;
};

struct RunReport {
  std::string run_id;
  Instant started_at{};
  Instant finished_at{};
  std::int64_t pages_considered = 0;
  std::int64_t pages_selected = 0;
  std::int64_t news_created = 0;
  std::int64_t news_updated = 0;
  std::vector<std::string> degradations;

  bool operator==(const RunReport&) const = default;
};

struct SaveResult {
  NewsItem item;
  bool created = false;
};

struct StoreOptions {
  /// A news item for the same page generated within this horizon is updated
  /// in place instead of duplicated.
  std::chrono::seconds dedup_horizon = std::chrono::hours{48};
};

/// The authorgraph: pages, authors, categories, edits, news items and runs in
/// one SQLite file. Every mutating operation is atomic; nested operations
/// join the enclosing transaction.
class GraphStore {
 public:
  /// Opens (creating if needed) the store at `path`. ":memory:" gives a
  /// private in-memory store.
  explicit GraphStore(const std::filesystem::path& path, StoreOptions options = {});
  ~GraphStore();
  GraphStore(GraphStore&&) noexcept;
  GraphStore& operator=(GraphStore&&) noexcept;
  GraphStore(const GraphStore&) = delete;
  GraphStore& operator=(const GraphStore&) = delete;

  /// RAII savepoint. Rolls back unless commit() was called.
  class Transaction {
   public:
    Transaction(Transaction&&) noexcept;
    Transaction& operator=(Transaction&&) = delete;
    ~Transaction();
    void commit();

   private:
    friend class GraphStore;
    Transaction(sqlite3* db, std::string name);
    sqlite3* db_;
    std::string name_;
    bool open_;
  };

  Transaction begin();

  /// Upserts pages, authors, categories and edits (keyed by revision id) and
  /// records the run. Re-ingesting the same edits adds nothing.
  IngestStats ingest_working_set(const WorkingSet& ws);

  /// Throws LookupError unless the page is in both `ws` and the store.
  RankInputs gather_rank_inputs(PageId page_id, const WorkingSet& ws,
                                const PageViewStats& stats) const;

  /// Authors by total edit count, descending; ties by author id ascending.
  std::vector<AuthorRecord> top_editors(std::size_t k = 50) const;

  /// Authors by edit count within `category`, descending; same tie-break.
  /// Authors with no edit in the category are not listed.
  std::vector<AuthorRecord> category_top_experts(const std::string& category,
                                                 std::size_t k = 5) const;

  /// Pages sharing at least one author with `page_id`, with the number of
  /// shared authors, by count descending then page id ascending.
  std::vector<std::pair<PageId, std::int64_t>> shared_editorship_neighbors(PageId page_id) const;

  SaveResult save_news_item(const NewsItem& item);

  /// Ordered by updated_at descending, then item id ascending.
  std::vector<NewsItem> list_news(const std::optional<std::string>& category = std::nullopt,
                                  std::optional<std::size_t> limit = std::nullopt) const;
  std::optional<NewsItem> find_news(const std::string& item_id) const;

  void save_run_report(const RunReport& report);
  std::optional<RunReport> find_run(const std::string& run_id) const;
  std::int64_t run_count() const;

  std::optional<AuthorRecord> find_author(const std::string& author_id) const;
  std::set<std::string> page_categories(PageId page_id) const;
  bool has_page(PageId page_id) const;
  std::int64_t author_count() const;

  /// Every stored edit, ordered by revision id. `categories` holds the
  /// page's current categories.
  std::vector<EditRecord> all_edits() const;

 private:
  AuthorRecord load_author(const std::string& author_id, std::int64_t total) const;

  sqlite3* db_ = nullptr;
  StoreOptions options_;
  mutable std::uint64_t savepoint_counter_ = 0;
};

}  // namespace editwire
