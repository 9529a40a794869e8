#include "editwire/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "editwire/text.hpp"
#include "json.hpp"

namespace editwire {

using nlohmann::json;

std::size_t WorkingSet::edit_count() const {
  std::size_t n = 0;
  for (const auto& [id, page] : pages) n += page.edits.size();
  return n;
}

bool IngestFilters::accepts(const EditRecord& edit) const {
  if (exclude_bots && edit.is_bot) return false;
  if (!namespaces.empty() && !namespaces.contains(edit.namespace_id)) return false;
  return true;
}

std::string normalize_category(std::string_view name) {
  std::string s = trim(name);
  if (starts_with_ci(s, "category:")) s = trim(std::string_view(s).substr(9));
  return s;
}

void finalize_edit(EditRecord& edit) {
  edit.added_char_count = utf8_length(edit.added_text);
  std::vector<std::string> cats;
  for (const auto& c : edit.categories) {
    std::string n = normalize_category(c);
    if (!n.empty() && std::find(cats.begin(), cats.end(), n) == cats.end()) cats.push_back(n);
  }
  edit.categories = std::move(cats);
}

std::vector<EditRecord> apply_filters(const std::vector<EditRecord>& edits,
                                      const IngestFilters& filters) {
  std::vector<EditRecord> out;
  std::copy_if(edits.begin(), edits.end(), std::back_inserter(out),
               [&](const EditRecord& e) { return filters.accepts(e); });
  return out;
}

// ---- stream format ----

namespace {

const json& require(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + field + "'");
  return *it;
}

std::string require_string(const json& obj, const char* field) {
  const json& v = require(obj, field);
  if (!v.is_string()) throw ParseError(std::string("field '") + field + "' is not a string");
  return v.get<std::string>();
}

std::int64_t require_int(const json& obj, const char* field) {
  const json& v = require(obj, field);
  if (!v.is_number_integer()) {
    throw ParseError(std::string("field '") + field + "' is not an integer");
  }
  return v.get<std::int64_t>();
}

bool require_bool(const json& obj, const char* field) {
  const json& v = require(obj, field);
  if (!v.is_boolean()) throw ParseError(std::string("field '") + field + "' is not a boolean");
  return v.get<bool>();
}

}  // namespace

EditRecord parse_stream_line(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError("line is not a JSON object");

  EditRecord edit;
  std::string ts = require_string(obj, "ts");
  auto parsed = parse_iso8601(ts);
  if (!parsed) throw ParseError("field 'ts' is not an ISO-8601 instant: " + ts);
  edit.timestamp = *parsed;
  edit.revision_id = require_int(obj, "rev_id");
  edit.page_id = require_int(obj, "page_id");
  edit.page_title = require_string(obj, "page_title");
  edit.namespace_id = static_cast<int>(require_int(obj, "ns"));
  edit.author = require_string(obj, "user");
  edit.is_bot = require_bool(obj, "bot");
  edit.comment = require_string(obj, "comment");
  edit.added_text = require_string(obj, "added_text");
  const json& cats = require(obj, "categories");
  if (!cats.is_array()) throw ParseError("field 'categories' is not an array");
  for (const auto& c : cats) {
    if (!c.is_string()) throw ParseError("field 'categories' holds a non-string entry");
    edit.categories.push_back(c.get<std::string>());
  }
  finalize_edit(edit);
  return edit;
}

std::string format_stream_line(const EditRecord& edit) {
  nlohmann::ordered_json obj;
  obj["ts"] = format_iso8601(edit.timestamp);
  obj["rev_id"] = edit.revision_id;
  obj["page_id"] = edit.page_id;
  obj["page_title"] = edit.page_title;
  obj["ns"] = edit.namespace_id;
  obj["user"] = edit.author;
  obj["bot"] = edit.is_bot;
  obj["comment"] = edit.comment;
  obj["added_text"] = edit.added_text;
  obj["categories"] = edit.categories;
  return obj.dump();
}

std::vector<EditRecord> replay_stream(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read change stream " + path.string());
  std::vector<EditRecord> out;
  std::unordered_set<RevisionId> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    EditRecord edit;
    try {
      edit = parse_stream_line(line);
    } catch (const ParseError& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (seen.insert(edit.revision_id).second) out.push_back(std::move(edit));
  }
  if (in.bad()) throw IoError("error while reading " + path.string());
  return out;
}

// ---- working set ----

WorkingSet build_working_set(const std::vector<EditRecord>& edits, std::string run_id,
                             const WorkingSetOptions& options) {
  WorkingSet ws;
  ws.run_id = std::move(run_id);
  std::unordered_set<RevisionId> seen;
  for (const auto& edit : edits) {
    if (!seen.insert(edit.revision_id).second) continue;
    auto& page = ws.pages[edit.page_id];
    if (page.edits.empty()) page.title = edit.page_title;
    page.categories.insert(edit.categories.begin(), edit.categories.end());
    page.edits.push_back(edit);
  }

  if (ws.pages.size() > options.max_pages) {
    std::vector<std::pair<std::size_t, PageId>> ranked;
    for (const auto& [id, page] : ws.pages) ranked.emplace_back(page.edits.size(), id);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t i = options.max_pages; i < ranked.size(); ++i) {
      ws.pages.erase(ranked[i].second);
    }
  }

  bool first = true;
  for (auto& [id, page] : ws.pages) {
    std::stable_sort(page.edits.begin(), page.edits.end(),
                     [](const EditRecord& a, const EditRecord& b) {
                       return a.timestamp < b.timestamp;
                     });
    for (const auto& e : page.edits) {
      if (first || e.timestamp < ws.window_start) ws.window_start = e.timestamp;
      if (first || e.timestamp > ws.window_end) ws.window_end = e.timestamp;
      first = false;
    }
  }
  if (first && options.fallback_window) {
    ws.window_start = options.fallback_window->start;
    ws.window_end = options.fallback_window->end;
  }
  return ws;
}

std::vector<EditRecord> flatten(const WorkingSet& ws) {
  std::vector<EditRecord> out;
  for (const auto& [id, page] : ws.pages) {
    out.insert(out.end(), page.edits.begin(), page.edits.end());
  }
  return out;
}

// ---- live API ----

namespace {

std::string join_ids(const std::vector<PageId>& ids, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (!out.empty()) out += '|';
    out += std::to_string(ids[i]);
  }
  return out;
}

json parse_api_body(const HttpResponse& response, const std::string& what) {
  if (response.status != 200) {
    throw TransportError(what + " returned HTTP " + std::to_string(response.status),
                         response.status);
  }
  json doc;
  try {
    doc = json::parse(response.body);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": response is not JSON: " + e.what());
  }
  if (!doc.is_object()) throw ParseError(what + ": response is not a JSON object");
  if (auto err = doc.find("error"); err != doc.end()) {
    throw ParseError(what + ": API error: " + err->dump());
  }
  return doc;
}

// Field accessors that name the offending path on failure.
const json& field(const json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw ParseError("malformed API response: '" + path + "' is not an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("malformed API response: missing '" + path + "." + key + "'");
  }
  return *it;
}

std::int64_t int_field(const json& obj, const std::string& path, const char* key) {
  const json& v = field(obj, path, key);
  if (!v.is_number_integer()) {
    throw ParseError("malformed API response: '" + path + "." + key + "' is not an integer");
  }
  return v.get<std::int64_t>();
}

std::string string_field(const json& obj, const std::string& path, const char* key) {
  const json& v = field(obj, path, key);
  if (!v.is_string()) {
    throw ParseError("malformed API response: '" + path + "." + key + "' is not a string");
  }
  return v.get<std::string>();
}

// formatversion=2 uses booleans, formatversion=1 marks set flags with "".
bool flag_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (it->is_boolean()) return it->get<bool>();
  return true;
}

}  // namespace

RecentChangesClient::RecentChangesClient(std::string api_endpoint, HttpClient http,
                                         RecentChangesOptions options)
    : endpoint_(std::move(api_endpoint)), http_(std::move(http)), options_(std::move(options)) {}

std::string RecentChangesClient::build_url(const std::map<std::string, std::string>& params) const {
  std::string url = endpoint_;
  char sep = url.find('?') == std::string::npos ? '?' : '&';
  for (const auto& [k, v] : params) {
    url += sep;
    url += url_encode(k) + "=" + url_encode(v);
    sep = '&';
  }
  return url;
}

std::vector<EditRecord> RecentChangesClient::fetch_recent_changes(
    const TimeWindow& window, const IngestFilters& filters) const {
  if (!(window.start < window.end)) {
    throw PreconditionError("recent-changes window must satisfy start < end");
  }
  std::map<std::string, std::string> base = {
      {"action", "query"},
      {"list", "recentchanges"},
      {"format", "json"},
      {"formatversion", "2"},
      {"rcprop", "title|ids|sizes|flags|user|timestamp|comment"},
      {"rctype", "edit|new"},
      {"rcdir", "newer"},
      {"rcstart", format_iso8601(window.start)},
      {"rcend", format_iso8601(window.end)},
      {"rclimit", std::to_string(options_.page_size)},
  };
  if (!filters.namespaces.empty()) {
    std::string ns;
    for (int n : filters.namespaces) {
      if (!ns.empty()) ns += '|';
      ns += std::to_string(n);
    }
    base["rcnamespace"] = ns;
  }
  if (filters.exclude_bots) base["rcshow"] = "!bot";
  for (const auto& [k, v] : options_.extra_params) base[k] = v;

  struct Pending {
    EditRecord edit;
    RevisionId parent = 0;
    std::int64_t size_delta = 0;
  };
  std::vector<Pending> pending;
  std::unordered_set<RevisionId> seen;
  std::map<std::string, std::string> cont;
  std::size_t index = 0;
  while (true) {
    auto params = base;
    for (const auto& [k, v] : cont) params[k] = v;
    json doc = parse_api_body(http_.get(build_url(params)), "recentchanges");
    const json& changes = field(field(doc, "", "query"), "query", "recentchanges");
    if (!changes.is_array()) {
      throw ParseError("malformed API response: 'query.recentchanges' is not an array");
    }
    for (const json& rc : changes) {
      std::string path = "query.recentchanges[" + std::to_string(index++) + "]";
      Pending p;
      EditRecord& e = p.edit;
      e.revision_id = int_field(rc, path, "revid");
      e.page_id = int_field(rc, path, "pageid");
      e.page_title = string_field(rc, path, "title");
      e.namespace_id = static_cast<int>(int_field(rc, path, "ns"));
      e.author = rc.contains("user") ? string_field(rc, path, "user") : std::string();
      e.is_bot = flag_field(rc, "bot");
      std::string ts = string_field(rc, path, "timestamp");
      auto parsed = parse_iso8601(ts);
      if (!parsed) throw ParseError("malformed API response: bad '" + path + ".timestamp'");
      e.timestamp = *parsed;
      e.comment = rc.contains("comment") ? string_field(rc, path, "comment") : std::string();
      if (rc.contains("old_revid")) p.parent = int_field(rc, path, "old_revid");
      if (rc.contains("newlen") && rc.contains("oldlen")) {
        p.size_delta = int_field(rc, path, "newlen") - int_field(rc, path, "oldlen");
      }
      // Some feeds carry text and categories inline.
      if (auto it = rc.find("added_text"); it != rc.end() && it->is_string()) {
        e.added_text = it->get<std::string>();
      }
      if (auto it = rc.find("categories"); it != rc.end() && it->is_array()) {
        for (const auto& c : *it) {
          if (c.is_string()) e.categories.push_back(c.get<std::string>());
          else if (c.is_object() && c.contains("title")) e.categories.push_back(c["title"].get<std::string>());
        }
      }
      if (e.timestamp < window.start || e.timestamp > window.end) continue;
      if (!filters.accepts(e)) continue;
      if (!seen.insert(e.revision_id).second) continue;
      pending.push_back(std::move(p));
    }
    auto c = doc.find("continue");
    if (c == doc.end() || !c->is_object() || c->empty()) break;
    cont.clear();
    for (auto it = c->begin(); it != c->end(); ++it) {
      cont[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
    }
  }

  std::vector<PageId> need_categories;
  for (const auto& p : pending) {
    if (p.edit.categories.empty()) need_categories.push_back(p.edit.page_id);
  }
  std::sort(need_categories.begin(), need_categories.end());
  need_categories.erase(std::unique(need_categories.begin(), need_categories.end()),
                        need_categories.end());
  auto categories = fetch_categories(need_categories);

  std::vector<EditRecord> out;
  out.reserve(pending.size());
  for (auto& p : pending) {
    EditRecord& e = p.edit;
    if (e.categories.empty()) {
      if (auto it = categories.find(e.page_id); it != categories.end()) e.categories = it->second;
    }
    if (!e.added_text.empty()) {
      finalize_edit(e);
    } else {
      std::optional<std::string> text;
      if (options_.fetch_diffs) text = fetch_added_text(p.parent, e.revision_id);
      if (text && !text->empty()) {
        e.added_text = std::move(*text);
        finalize_edit(e);
      } else {
        e.added_text = e.comment;
        finalize_edit(e);
        e.added_char_count = static_cast<std::size_t>(std::max<std::int64_t>(0, p.size_delta));
      }
    }
    out.push_back(std::move(e));
  }
  std::stable_sort(out.begin(), out.end(), [](const EditRecord& a, const EditRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.revision_id < b.revision_id;
  });
  return out;
}

std::map<PageId, std::vector<std::string>> RecentChangesClient::fetch_categories(
    const std::vector<PageId>& page_ids) const {
  std::map<PageId, std::vector<std::string>> out;
  constexpr std::size_t kBatch = 50;
  for (std::size_t begin = 0; begin < page_ids.size(); begin += kBatch) {
    std::size_t end = std::min(page_ids.size(), begin + kBatch);
    std::map<std::string, std::string> cont;
    while (true) {
      std::map<std::string, std::string> params = {
          {"action", "query"},      {"prop", "categories"},
          {"format", "json"},       {"formatversion", "2"},
          {"cllimit", "max"},       {"pageids", join_ids(page_ids, begin, end)},
      };
      for (const auto& [k, v] : cont) params[k] = v;
      json doc = parse_api_body(http_.get(build_url(params)), "categories");
      const json& pages = field(field(doc, "", "query"), "query", "pages");
      auto visit = [&](const json& page, const std::string& path) {
        PageId id = int_field(page, path, "pageid");
        auto& list = out[id];
        if (auto it = page.find("categories"); it != page.end() && it->is_array()) {
          for (const auto& c : *it) {
            std::string name = normalize_category(string_field(c, path + ".categories", "title"));
            if (std::find(list.begin(), list.end(), name) == list.end()) list.push_back(name);
          }
        }
      };
      if (pages.is_array()) {
        for (std::size_t i = 0; i < pages.size(); ++i) {
          visit(pages[i], "query.pages[" + std::to_string(i) + "]");
        }
      } else if (pages.is_object()) {
        for (auto it = pages.begin(); it != pages.end(); ++it) visit(*it, "query.pages." + it.key());
      } else {
        throw ParseError("malformed API response: 'query.pages' is neither array nor object");
      }
      auto c = doc.find("continue");
      if (c == doc.end() || !c->is_object() || c->empty()) break;
      cont.clear();
      for (auto it = c->begin(); it != c->end(); ++it) {
        cont[it.key()] = it->is_string() ? it->get<std::string>() : it->dump();
      }
    }
  }
  return out;
}

std::optional<std::string> RecentChangesClient::fetch_added_text(RevisionId parent_id,
                                                                 RevisionId revision_id) const {
  try {
    if (parent_id <= 0) {
      // New page: the whole first revision is inserted text.
      json doc = parse_api_body(
          http_.get(build_url({{"action", "query"},
                               {"prop", "revisions"},
                               {"revids", std::to_string(revision_id)},
                               {"rvprop", "content"},
                               {"rvslots", "main"},
                               {"format", "json"},
                               {"formatversion", "2"}})),
          "revisions");
      const json& pages = doc.at("query").at("pages");
      const json& rev = pages.at(0).at("revisions").at(0);
      if (rev.contains("slots")) return rev.at("slots").at("main").at("content").get<std::string>();
      return rev.at("content").get<std::string>();
    }
    json doc = parse_api_body(http_.get(build_url({{"action", "compare"},
                                                   {"fromrev", std::to_string(parent_id)},
                                                   {"torev", std::to_string(revision_id)},
                                                   {"prop", "diff"},
                                                   {"format", "json"},
                                                   {"formatversion", "2"}})),
                              "compare");
    const json& cmp = doc.at("compare");
    std::string body = cmp.contains("body") ? cmp.at("body").get<std::string>()
                                            : cmp.at("*").get<std::string>();
    return extract_inserted_text(body);
  } catch (const Error&) {
    return std::nullopt;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::string extract_inserted_text(std::string_view html) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    auto cell = html.find("diff-addedline", pos);
    if (cell == std::string_view::npos) break;
    auto open_end = html.find('>', cell);
    if (open_end == std::string_view::npos) break;
    auto close = html.find("</td>", open_end);
    if (close == std::string_view::npos) close = html.size();
    std::string_view inner = html.substr(open_end + 1, close - open_end - 1);
    std::string piece;
    if (inner.find("<ins") != std::string_view::npos) {
      std::size_t p = 0;
      while (true) {
        auto ins = inner.find("<ins", p);
        if (ins == std::string_view::npos) break;
        auto ins_open = inner.find('>', ins);
        auto ins_close = inner.find("</ins>", ins_open);
        if (ins_open == std::string_view::npos || ins_close == std::string_view::npos) break;
        if (!piece.empty()) piece += ' ';
        piece += inner.substr(ins_open + 1, ins_close - ins_open - 1);
        p = ins_close + 6;
      }
    } else {
      piece = std::string(inner);
    }
    std::string text = trim(decode_html_entities(strip_html_tags(piece)));
    if (!text.empty()) {
      if (!out.empty()) out += '\n';
      out += text;
    }
    pos = close;
  }
  return out;
}

}  // namespace editwire
