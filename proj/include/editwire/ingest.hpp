#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "editwire/common.hpp"
#include "editwire/http.hpp"

namespace editwire {

using PageId = std::int64_t;
using RevisionId = std::int64_t;

/// One revision event.
struct EditRecord {
  RevisionId revision_id = 0;
  PageId page_id = 0;
  std::string page_title;
  int namespace_id = 0;
  std::string author;
  bool is_bot = false;
  Instant timestamp{};
  std::string comment;
  std::string added_text;
  std::size_t added_char_count = 0;  // code points in added_text
  std::vector<std::string> categories;

  bool operator==(const EditRecord&) const = default;
};

struct WorkingSetPage {
  std::string title;
  std::set<std::string> categories;
  std::vector<EditRecord> edits;  // ascending by timestamp
};

/// The edits of one pipeline run, grouped by page.
struct WorkingSet {
  std::string run_id;
  Instant window_start{};
  Instant window_end{};
  std::map<PageId, WorkingSetPage> pages;

  std::size_t edit_count() const;
  bool empty() const { return pages.empty(); }
};

struct IngestFilters {
  std::set<int> namespaces{0};  // empty = allow every namespace
  bool exclude_bots = true;

  bool accepts(const EditRecord& edit) const;
};

struct TimeWindow {
  Instant start{};
  Instant end{};
};

struct WorkingSetOptions {
  /// Used as window bounds when there are no edits.
  std::optional<TimeWindow> fallback_window;
  /// Pages with the most edits are kept; ties keep the lower page_id.
  std::size_t max_pages = 500;
};

/// Strips a leading "Category:" (any case) and surrounding whitespace.
std::string normalize_category(std::string_view name);

/// Sets added_char_count from added_text and normalizes categories.
void finalize_edit(EditRecord& edit);

std::vector<EditRecord> apply_filters(const std::vector<EditRecord>& edits,
                                      const IngestFilters& filters);

// ---- recorded change streams ----

/// Parses one line of the recorded change-stream format. Throws ParseError
/// naming the missing or mistyped field.
EditRecord parse_stream_line(std::string_view line);

/// Serializes a record as one stream line (no trailing newline).
std::string format_stream_line(const EditRecord& edit);

/// Reads a line-delimited JSON change stream. Blank lines are skipped and
/// duplicate revision ids collapse to their first occurrence.
std::vector<EditRecord> replay_stream(const std::filesystem::path& path);

// ---- working set ----

WorkingSet build_working_set(const std::vector<EditRecord>& edits, std::string run_id,
                             const WorkingSetOptions& options = {});

/// All edits of a working set, page by page.
std::vector<EditRecord> flatten(const WorkingSet& ws);

// ---- live MediaWiki API ----

struct RecentChangesOptions {
  std::size_t page_size = 500;  // rclimit
  /// Fetch revision diffs to reconstruct added_text.
  bool fetch_diffs = true;
  /// Extra query parameters appended to every recent-changes request.
  std::map<std::string, std::string> extra_params;
};

/// Client for a MediaWiki-compatible action API ("…/w/api.php").
class RecentChangesClient {
 public:
  RecentChangesClient(std::string api_endpoint, HttpClient http,
                      RecentChangesOptions options = {});

  /// All edits in [window.start, window.end] passing the filters, ascending
  /// by timestamp. Follows continuation to exhaustion.
  std::vector<EditRecord> fetch_recent_changes(const TimeWindow& window,
                                               const IngestFilters& filters) const;

  /// Category names per page id, normalized.
  std::map<PageId, std::vector<std::string>> fetch_categories(
      const std::vector<PageId>& page_ids) const;

  /// Text inserted by `revision_id` relative to its parent. nullopt when the
  /// diff cannot be obtained.
  std::optional<std::string> fetch_added_text(RevisionId parent_id, RevisionId revision_id) const;

 private:
  std::string build_url(const std::map<std::string, std::string>& params) const;

  std::string endpoint_;
  HttpClient http_;
  RecentChangesOptions options_;
};

/// Extracts inserted text from a MediaWiki HTML diff table. Inline <ins>
/// fragments are used when a line carries them, otherwise the whole added
/// line.
std::string extract_inserted_text(std::string_view diff_html);

}  // namespace editwire
