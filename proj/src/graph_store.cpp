#include "editwire/graph_store.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "sqlite_util.hpp"

namespace editwire {

using nlohmann::json;
using sqlite::Statement;

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS pages(
  page_id INTEGER PRIMARY KEY,
  title TEXT NOT NULL);
CREATE TABLE IF NOT EXISTS page_categories(
  page_id INTEGER NOT NULL REFERENCES pages(page_id),
  category TEXT NOT NULL,
  PRIMARY KEY(page_id, category));
CREATE INDEX IF NOT EXISTS idx_page_categories_category ON page_categories(category);
CREATE TABLE IF NOT EXISTS authors(
  author_id TEXT PRIMARY KEY);
CREATE TABLE IF NOT EXISTS edits(
  revision_id INTEGER PRIMARY KEY,
  page_id INTEGER NOT NULL REFERENCES pages(page_id),
  author_id TEXT NOT NULL REFERENCES authors(author_id),
  ts INTEGER NOT NULL,
  namespace INTEGER NOT NULL,
  is_bot INTEGER NOT NULL,
  comment TEXT NOT NULL,
  added_text TEXT NOT NULL,
  added_char_count INTEGER NOT NULL);
CREATE INDEX IF NOT EXISTS idx_edits_page ON edits(page_id);
CREATE INDEX IF NOT EXISTS idx_edits_author ON edits(author_id);
CREATE TABLE IF NOT EXISTS news(
  item_id TEXT PRIMARY KEY,
  page_id INTEGER NOT NULL REFERENCES pages(page_id),
  title TEXT NOT NULL,
  summary TEXT NOT NULL,
  categories TEXT NOT NULL,
  generated_at INTEGER NOT NULL,
  updated_at INTEGER NOT NULL,
  source_revision_ids TEXT NOT NULL,
  final_rank REAL NOT NULL,
  rank_breakdown TEXT NOT NULL);
CREATE INDEX IF NOT EXISTS idx_news_page ON news(page_id);
CREATE TABLE IF NOT EXISTS news_categories(
  item_id TEXT NOT NULL REFERENCES news(item_id),
  category TEXT NOT NULL,
  PRIMARY KEY(item_id, category));
CREATE TABLE IF NOT EXISTS runs(
  seq INTEGER PRIMARY KEY AUTOINCREMENT,
  run_id TEXT NOT NULL UNIQUE,
  started_at INTEGER NOT NULL DEFAULT 0,
  finished_at INTEGER NOT NULL DEFAULT 0,
  pages_considered INTEGER NOT NULL DEFAULT 0,
  pages_selected INTEGER NOT NULL DEFAULT 0,
  news_created INTEGER NOT NULL DEFAULT 0,
  news_updated INTEGER NOT NULL DEFAULT 0,
  degradations TEXT NOT NULL DEFAULT '[]',
  pages_added INTEGER NOT NULL DEFAULT 0,
  edits_added INTEGER NOT NULL DEFAULT 0,
  authors_added INTEGER NOT NULL DEFAULT 0);
)sql";

// An author is news-generating through an edit that precedes a news item
// generated from the same page.
constexpr const char* kNewsGeneratingAuthors = R"sql(
  SELECT e.author_id FROM edits e JOIN news n ON n.page_id = e.page_id
  WHERE e.ts < n.generated_at)sql";

std::int64_t to_unix(Instant t) { return t.time_since_epoch().count(); }
Instant from_unix(std::int64_t s) { return Instant{std::chrono::seconds{s}}; }

std::int64_t scalar(sqlite3* db, const std::string& sql) {
  Statement st(db, sql);
  return st.step() ? st.int64(0) : 0;
}

std::string breakdown_to_json(const std::map<std::string, RankContribution>& breakdown) {
  json obj = json::object();
  for (const auto& [name, c] : breakdown) obj[name] = {{"value", c.value}, {"weight", c.weight}};
  return obj.dump();
}

std::map<std::string, RankContribution> breakdown_from_json(const std::string& text) {
  std::map<std::string, RankContribution> out;
  json obj = json::parse(text);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    out[it.key()] = {it->at("value").get<double>(), it->at("weight").get<double>()};
  }
  return out;
}

constexpr const char* kNewsColumns =
    "n.item_id, n.page_id, n.title, n.summary, n.categories, n.generated_at, n.updated_at, "
    "n.source_revision_ids, n.final_rank, n.rank_breakdown";

NewsItem read_news_row(const Statement& st) {
  NewsItem item;
  item.item_id = st.text(0);
  item.page_id = st.int64(1);
  item.title = st.text(2);
  item.summary = st.text(3);
  item.categories = json::parse(st.text(4)).get<std::vector<std::string>>();
  item.generated_at = from_unix(st.int64(5));
  item.updated_at = from_unix(st.int64(6));
  item.source_revision_ids = json::parse(st.text(7)).get<std::vector<RevisionId>>();
  item.final_rank = st.real(8);
  item.rank_breakdown = breakdown_from_json(st.text(9));
  return item;
}

}  // namespace

void validate_news_item(const NewsItem& item) {
  if (item.source_revision_ids.empty()) {
    throw IntegrityError("news item " + item.item_id + " has no source revisions");
  }
  if (item.updated_at < item.generated_at) {
    throw IntegrityError("news item " + item.item_id + " has updated_at before generated_at");
  }
  if (item.summary.empty()) throw IntegrityError("news item " + item.item_id + " has no summary");
  double total = 0.0;
  for (const auto& [name, c] : item.rank_breakdown) total += c.value * c.weight;
  if (std::abs(total - item.final_rank) > 1e-12 * std::max(1.0, std::abs(total))) {
    throw IntegrityError("news item " + item.item_id +
                         " final_rank does not equal its weighted rank breakdown");
  }
}

// ---- lifecycle ----

GraphStore::GraphStore(const std::filesystem::path& path, StoreOptions options)
    : options_(options) {
  if (path != ":memory:" && path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  int rc = sqlite3_open_v2(path.string().c_str(), &db_,
                           SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_NOMUTEX,
                           nullptr);
  if (rc != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    throw StorageError("cannot open store " + path.string() + ": " + msg);
  }
  sqlite3_busy_timeout(db_, 10000);
  sqlite::exec(db_, "PRAGMA foreign_keys = ON");
  if (path != ":memory:") sqlite::exec(db_, "PRAGMA journal_mode = WAL");
  sqlite::exec(db_, kSchema);
}

GraphStore::~GraphStore() {
  if (db_) sqlite3_close(db_);
}

GraphStore::GraphStore(GraphStore&& other) noexcept
    : db_(std::exchange(other.db_, nullptr)),
      options_(other.options_),
      savepoint_counter_(other.savepoint_counter_) {}

GraphStore& GraphStore::operator=(GraphStore&& other) noexcept {
  if (this != &other) {
    if (db_) sqlite3_close(db_);
    db_ = std::exchange(other.db_, nullptr);
    options_ = other.options_;
    savepoint_counter_ = other.savepoint_counter_;
  }
  return *this;
}

// ---- transactions ----

GraphStore::Transaction::Transaction(sqlite3* db, std::string name)
    : db_(db), name_(std::move(name)), open_(true) {
  sqlite::exec(db_, "SAVEPOINT " + name_);
}

GraphStore::Transaction::Transaction(Transaction&& other) noexcept
    : db_(other.db_), name_(std::move(other.name_)), open_(std::exchange(other.open_, false)) {}

GraphStore::Transaction::~Transaction() {
  if (!open_) return;
  // Errors here cannot be reported; the connection stays usable either way.
  sqlite3_exec(db_, ("ROLLBACK TO " + name_).c_str(), nullptr, nullptr, nullptr);
  sqlite3_exec(db_, ("RELEASE " + name_).c_str(), nullptr, nullptr, nullptr);
}

void GraphStore::Transaction::commit() {
  if (!open_) throw StorageError("transaction already finished");
  sqlite::exec(db_, "RELEASE " + name_);
  open_ = false;
}

GraphStore::Transaction GraphStore::begin() {
  return Transaction(db_, "sp" + std::to_string(++savepoint_counter_));
}

// ---- ingest ----

IngestStats GraphStore::ingest_working_set(const WorkingSet& ws) {
  Transaction tx = begin();
  IngestStats stats;

  Statement page_exists(db_, "SELECT 1 FROM pages WHERE page_id = ?1");
  Statement upsert_page(db_,
                        "INSERT INTO pages(page_id, title) VALUES(?1, ?2) "
                        "ON CONFLICT(page_id) DO UPDATE SET title = excluded.title");
  Statement add_category(db_,
                         "INSERT OR IGNORE INTO page_categories(page_id, category) VALUES(?1, ?2)");
  Statement add_author(db_, "INSERT OR IGNORE INTO authors(author_id) VALUES(?1)");
  Statement add_edit(db_,
                     "INSERT OR IGNORE INTO edits(revision_id, page_id, author_id, ts, namespace, "
                     "is_bot, comment, added_text, added_char_count) "
                     "VALUES(?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9)");

  for (const auto& [page_id, page] : ws.pages) {
    page_exists.reset();
    page_exists.bind(1, page_id);
    if (!page_exists.step()) ++stats.pages_added;
    page_exists.reset();

    upsert_page.reset();
    upsert_page.bind(1, page_id).bind(2, page.title).run();
    for (const auto& category : page.categories) {
      add_category.reset();
      add_category.bind(1, page_id).bind(2, category).run();
    }
    for (const auto& edit : page.edits) {
      add_author.reset();
      add_author.bind(1, edit.author).run();
      stats.authors_added += sqlite3_changes(db_);
      add_edit.reset();
      add_edit.bind(1, edit.revision_id)
          .bind(2, page_id)
          .bind(3, edit.author)
          .bind(4, to_unix(edit.timestamp))
          .bind(5, edit.namespace_id)
          .bind(6, edit.is_bot ? 1 : 0)
          .bind(7, edit.comment)
          .bind(8, edit.added_text)
          .bind(9, static_cast<std::int64_t>(edit.added_char_count))
          .run();
      stats.edits_added += sqlite3_changes(db_);
    }
  }

  Statement run(db_,
                "INSERT INTO runs(run_id, started_at, pages_added, edits_added, authors_added) "
                "VALUES(?1, ?2, ?3, ?4, ?5) ON CONFLICT(run_id) DO UPDATE SET "
                "pages_added = pages_added + excluded.pages_added, "
                "edits_added = edits_added + excluded.edits_added, "
                "authors_added = authors_added + excluded.authors_added");
  run.bind(1, ws.run_id)
      .bind(2, to_unix(ws.window_end))
      .bind(3, stats.pages_added)
      .bind(4, stats.edits_added)
      .bind(5, stats.authors_added)
      .run();

  tx.commit();
  return stats;
}

// ---- rank inputs ----

RankInputs GraphStore::gather_rank_inputs(PageId page_id, const WorkingSet& ws,
                                          const PageViewStats& stats) const {
  auto ws_page = ws.pages.find(page_id);
  if (ws_page == ws.pages.end()) {
    throw LookupError("page " + std::to_string(page_id) + " is not in the working set");
  }
  if (!has_page(page_id)) {
    throw LookupError("page " + std::to_string(page_id) + " is not in the store");
  }

  RankInputs in;
  in.page_id = page_id;
  in.authors_total = author_count();
  {
    Statement st(db_, "SELECT COUNT(DISTINCT author_id) FROM edits WHERE page_id = ?1");
    st.bind(1, page_id);
    if (st.step()) in.authors_on_page = st.int64(0);
  }
  in.news_gen_authors_total =
      scalar(db_, std::string("SELECT COUNT(DISTINCT author_id) FROM (") + kNewsGeneratingAuthors + ")");
  {
    Statement st(db_, std::string("SELECT COUNT(DISTINCT p.author_id) FROM edits p "
                                  "WHERE p.page_id = ?1 AND p.author_id IN (") +
                          kNewsGeneratingAuthors + ")");
    st.bind(1, page_id);
    if (st.step()) in.news_gen_authors_on_page = st.int64(0);
  }
  {
    Statement st(db_, R"sql(
      SELECT COUNT(DISTINCT p.author_id) FROM edits p
      WHERE p.page_id = ?1 AND EXISTS (
        SELECT 1 FROM edits o
        JOIN page_categories oc ON oc.page_id = o.page_id
        JOIN page_categories pc ON pc.category = oc.category AND pc.page_id = ?1
        WHERE o.author_id = p.author_id AND o.page_id <> ?1))sql");
    st.bind(1, page_id);
    if (st.step()) in.domain_expert_authors_on_page = st.int64(0);
  }

  in.edits_of_page_in_set = static_cast<std::int64_t>(ws_page->second.edits.size());
  in.mean_edits_per_page_in_set =
      static_cast<double>(ws.edit_count()) / static_cast<double>(ws.pages.size());
  in.views_yesterday = stats.views_yesterday;
  in.views_last_30_days_total = stats.views_last_30_days_total;
  return in;
}

// ---- author queries ----

AuthorRecord GraphStore::load_author(const std::string& author_id, std::int64_t total) const {
  AuthorRecord rec;
  rec.author_id = author_id;
  rec.total_edit_count = total;
  Statement cats(db_,
                 "SELECT pc.category, COUNT(*) FROM edits e "
                 "JOIN page_categories pc ON pc.page_id = e.page_id "
                 "WHERE e.author_id = ?1 GROUP BY pc.category");
  cats.bind(1, author_id);
  while (cats.step()) rec.per_category_edit_counts[cats.text(0)] = cats.int64(1);
  Statement gen(db_, std::string("SELECT 1 FROM (") + kNewsGeneratingAuthors +
                         ") WHERE author_id = ?1 LIMIT 1");
  gen.bind(1, author_id);
  rec.news_generating = gen.step();
  return rec;
}

std::vector<AuthorRecord> GraphStore::top_editors(std::size_t k) const {
  std::vector<AuthorRecord> out;
  if (k == 0) return out;
  Statement st(db_,
               "SELECT author_id, COUNT(*) AS c FROM edits GROUP BY author_id "
               "ORDER BY c DESC, author_id ASC LIMIT ?1");
  st.bind(1, static_cast<std::int64_t>(k));
  std::vector<std::pair<std::string, std::int64_t>> rows;
  while (st.step()) rows.emplace_back(st.text(0), st.int64(1));
  for (const auto& [id, total] : rows) out.push_back(load_author(id, total));
  return out;
}

std::vector<AuthorRecord> GraphStore::category_top_experts(const std::string& category,
                                                           std::size_t k) const {
  std::vector<AuthorRecord> out;
  if (k == 0) return out;
  Statement st(db_,
               "SELECT e.author_id, COUNT(*) AS c FROM edits e "
               "JOIN page_categories pc ON pc.page_id = e.page_id "
               "WHERE pc.category = ?1 GROUP BY e.author_id "
               "ORDER BY c DESC, e.author_id ASC LIMIT ?2");
  st.bind(1, category).bind(2, static_cast<std::int64_t>(k));
  std::vector<std::string> ids;
  while (st.step()) ids.push_back(st.text(0));
  for (const auto& id : ids) {
    Statement total(db_, "SELECT COUNT(*) FROM edits WHERE author_id = ?1");
    total.bind(1, id);
    total.step();
    out.push_back(load_author(id, total.int64(0)));
  }
  return out;
}

std::optional<AuthorRecord> GraphStore::find_author(const std::string& author_id) const {
  Statement st(db_, "SELECT COUNT(*) FROM edits WHERE author_id = ?1");
  st.bind(1, author_id);
  st.step();
  std::int64_t total = st.int64(0);
  Statement exists(db_, "SELECT 1 FROM authors WHERE author_id = ?1");
  exists.bind(1, author_id);
  if (!exists.step()) return std::nullopt;
  return load_author(author_id, total);
}

std::vector<std::pair<PageId, std::int64_t>> GraphStore::shared_editorship_neighbors(
    PageId page_id) const {
  if (!has_page(page_id)) {
    throw LookupError("page " + std::to_string(page_id) + " is not in the store");
  }
  Statement st(db_, R"sql(
    SELECT o.page_id, COUNT(DISTINCT o.author_id) AS shared FROM edits p
    JOIN edits o ON o.author_id = p.author_id AND o.page_id <> p.page_id
    WHERE p.page_id = ?1
    GROUP BY o.page_id ORDER BY shared DESC, o.page_id ASC)sql");
  st.bind(1, page_id);
  std::vector<std::pair<PageId, std::int64_t>> out;
  while (st.step()) out.emplace_back(st.int64(0), st.int64(1));
  return out;
}

// ---- news ----

SaveResult GraphStore::save_news_item(const NewsItem& item) {
  validate_news_item(item);
  Transaction tx = begin();
  if (!has_page(item.page_id)) {
    throw IntegrityError("news item refers to unknown page " + std::to_string(item.page_id));
  }
  {
    Statement rev(db_, "SELECT page_id FROM edits WHERE revision_id = ?1");
    for (RevisionId id : item.source_revision_ids) {
      rev.reset();
      rev.bind(1, id);
      if (!rev.step()) {
        throw IntegrityError("news item refers to unknown revision " + std::to_string(id));
      }
      if (rev.int64(0) != item.page_id) {
        throw IntegrityError("revision " + std::to_string(id) + " does not belong to page " +
                             std::to_string(item.page_id));
      }
    }
  }

  const std::int64_t horizon = options_.dedup_horizon.count();
  Statement existing(db_,
                     "SELECT item_id, updated_at FROM news WHERE page_id = ?1 "
                     "AND generated_at >= ?2 AND generated_at <= ?3 "
                     "ORDER BY generated_at DESC, item_id ASC LIMIT 1");
  existing.bind(1, item.page_id)
      .bind(2, to_unix(item.generated_at) - horizon)
      .bind(3, to_unix(item.generated_at) + horizon);

  const std::string revisions = json(item.source_revision_ids).dump();
  const std::string breakdown = breakdown_to_json(item.rank_breakdown);
  std::string stored_id;
  bool created = false;
  if (existing.step()) {
    stored_id = existing.text(0);
    std::int64_t updated = std::max(existing.int64(1), to_unix(item.updated_at));
    Statement upd(db_,
                  "UPDATE news SET summary = ?2, source_revision_ids = ?3, final_rank = ?4, "
                  "rank_breakdown = ?5, updated_at = ?6 WHERE item_id = ?1");
    upd.bind(1, stored_id)
        .bind(2, item.summary)
        .bind(3, revisions)
        .bind(4, item.final_rank)
        .bind(5, breakdown)
        .bind(6, updated)
        .run();
  } else {
    stored_id = item.item_id;
    Statement ins(db_,
                  "INSERT INTO news(item_id, page_id, title, summary, categories, generated_at, "
                  "updated_at, source_revision_ids, final_rank, rank_breakdown) "
                  "VALUES(?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9, ?10)");
    ins.bind(1, item.item_id)
        .bind(2, item.page_id)
        .bind(3, item.title)
        .bind(4, item.summary)
        .bind(5, json(item.categories).dump())
        .bind(6, to_unix(item.generated_at))
        .bind(7, to_unix(item.updated_at))
        .bind(8, revisions)
        .bind(9, item.final_rank)
        .bind(10, breakdown);
    try {
      ins.run();
    } catch (const StorageError& e) {
      throw IntegrityError(std::string("cannot insert news item: ") + e.what());
    }
    Statement cat(db_, "INSERT OR IGNORE INTO news_categories(item_id, category) VALUES(?1, ?2)");
    for (const auto& c : item.categories) {
      cat.reset();
      cat.bind(1, item.item_id).bind(2, c).run();
    }
    created = true;
  }
  tx.commit();
  auto stored = find_news(stored_id);
  if (!stored) throw StorageError("news item vanished after save: " + stored_id);
  return SaveResult{std::move(*stored), created};
}

std::vector<NewsItem> GraphStore::list_news(const std::optional<std::string>& category,
                                            std::optional<std::size_t> limit) const {
  std::string sql = std::string("SELECT ") + kNewsColumns + " FROM news n";
  if (category) {
    sql += " WHERE EXISTS (SELECT 1 FROM news_categories c WHERE c.item_id = n.item_id "
           "AND c.category = ?1)";
  }
  sql += " ORDER BY n.updated_at DESC, n.item_id ASC";
  if (limit) sql += " LIMIT " + std::to_string(*limit);
  Statement st(db_, sql);
  if (category) st.bind(1, *category);
  std::vector<NewsItem> out;
  while (st.step()) out.push_back(read_news_row(st));
  return out;
}

std::optional<NewsItem> GraphStore::find_news(const std::string& item_id) const {
  Statement st(db_, std::string("SELECT ") + kNewsColumns + " FROM news n WHERE n.item_id = ?1");
  st.bind(1, item_id);
  if (!st.step()) return std::nullopt;
  return read_news_row(st);
}

// ---- runs ----

void GraphStore::save_run_report(const RunReport& report) {
  Transaction tx = begin();
  Statement st(db_,
               "INSERT INTO runs(run_id, started_at, finished_at, pages_considered, "
               "pages_selected, news_created, news_updated, degradations) "
               "VALUES(?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8) ON CONFLICT(run_id) DO UPDATE SET "
               "started_at = excluded.started_at, finished_at = excluded.finished_at, "
               "pages_considered = excluded.pages_considered, "
               "pages_selected = excluded.pages_selected, news_created = excluded.news_created, "
               "news_updated = excluded.news_updated, degradations = excluded.degradations");
  st.bind(1, report.run_id)
      .bind(2, to_unix(report.started_at))
      .bind(3, to_unix(report.finished_at))
      .bind(4, report.pages_considered)
      .bind(5, report.pages_selected)
      .bind(6, report.news_created)
      .bind(7, report.news_updated)
      .bind(8, json(report.degradations).dump())
      .run();
  tx.commit();
}

std::optional<RunReport> GraphStore::find_run(const std::string& run_id) const {
  Statement st(db_,
               "SELECT run_id, started_at, finished_at, pages_considered, pages_selected, "
               "news_created, news_updated, degradations FROM runs WHERE run_id = ?1");
  st.bind(1, run_id);
  if (!st.step()) return std::nullopt;
  RunReport r;
  r.run_id = st.text(0);
  r.started_at = from_unix(st.int64(1));
  r.finished_at = from_unix(st.int64(2));
  r.pages_considered = st.int64(3);
  r.pages_selected = st.int64(4);
  r.news_created = st.int64(5);
  r.news_updated = st.int64(6);
  r.degradations = json::parse(st.text(7)).get<std::vector<std::string>>();
  return r;
}

std::int64_t GraphStore::run_count() const { return scalar(db_, "SELECT COUNT(*) FROM runs"); }

// ---- misc ----

std::set<std::string> GraphStore::page_categories(PageId page_id) const {
  Statement st(db_, "SELECT category FROM page_categories WHERE page_id = ?1");
  st.bind(1, page_id);
  std::set<std::string> out;
  while (st.step()) out.insert(st.text(0));
  return out;
}

bool GraphStore::has_page(PageId page_id) const {
  Statement st(db_, "SELECT 1 FROM pages WHERE page_id = ?1");
  st.bind(1, page_id);
  return st.step();
}

std::int64_t GraphStore::author_count() const {
  return scalar(db_, "SELECT COUNT(*) FROM authors");
}

std::vector<EditRecord> GraphStore::all_edits() const {
  Statement st(db_,
               "SELECT e.revision_id, e.page_id, p.title, e.namespace, e.author_id, e.is_bot, "
               "e.ts, e.comment, e.added_text, e.added_char_count "
               "FROM edits e JOIN pages p ON p.page_id = e.page_id ORDER BY e.revision_id");
  std::vector<EditRecord> out;
  std::map<PageId, std::vector<std::string>> categories;
  while (st.step()) {
    EditRecord e;
    e.revision_id = st.int64(0);
    e.page_id = st.int64(1);
    e.page_title = st.text(2);
    e.namespace_id = static_cast<int>(st.int64(3));
    e.author = st.text(4);
    e.is_bot = st.int64(5) != 0;
    e.timestamp = from_unix(st.int64(6));
    e.comment = st.text(7);
    e.added_text = st.text(8);
    e.added_char_count = static_cast<std::size_t>(st.int64(9));
    auto it = categories.find(e.page_id);
    if (it == categories.end()) {
      auto cats = page_categories(e.page_id);
      it = categories.emplace(e.page_id, std::vector<std::string>(cats.begin(), cats.end())).first;
    }
    e.categories = it->second;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace editwire
