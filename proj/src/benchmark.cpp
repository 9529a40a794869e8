#include "editwire/benchmark.hpp"

#include <expat.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace editwire {

namespace {

// ---- minimal XML DOM on top of expat ----

struct XmlNode {
  std::string name;
  std::map<std::string, std::string> attributes;
  std::string text;
  std::vector<std::unique_ptr<XmlNode>> children;

  const XmlNode* child(std::string_view wanted) const {
    for (const auto& c : children) {
      if (c->name == wanted) return c.get();
    }
    return nullptr;
  }

  std::string child_text(std::string_view wanted) const {
    const XmlNode* c = child(wanted);
    return c ? trim(c->text) : std::string();
  }
};

struct DomBuilder {
  std::unique_ptr<XmlNode> root;
  std::vector<XmlNode*> stack;

  static void on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
    auto* self = static_cast<DomBuilder*>(data);
    auto node = std::make_unique<XmlNode>();
    node->name = name;
    for (int i = 0; attrs[i] && attrs[i + 1]; i += 2) node->attributes[attrs[i]] = attrs[i + 1];
    XmlNode* raw = node.get();
    if (self->stack.empty()) {
      self->root = std::move(node);
    } else {
      self->stack.back()->children.push_back(std::move(node));
    }
    self->stack.push_back(raw);
  }

  static void on_end(void* data, const XML_Char*) {
    static_cast<DomBuilder*>(data)->stack.pop_back();
  }

  static void on_text(void* data, const XML_Char* s, int len) {
    auto* self = static_cast<DomBuilder*>(data);
    if (!self->stack.empty()) self->stack.back()->text.append(s, static_cast<std::size_t>(len));
  }
};

std::unique_ptr<XmlNode> parse_xml(std::string_view document) {
  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser(XML_ParserCreate("UTF-8"),
                                                                       &XML_ParserFree);
  if (!parser) throw ParseError("cannot create XML parser");
  DomBuilder builder;
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), &DomBuilder::on_start, &DomBuilder::on_end);
  XML_SetCharacterDataHandler(parser.get(), &DomBuilder::on_text);
  if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), 1) ==
      XML_STATUS_ERROR) {
    throw ParseError(std::string("feed is not well-formed XML: ") +
                     XML_ErrorString(XML_GetErrorCode(parser.get())) + " at line " +
                     std::to_string(XML_GetCurrentLineNumber(parser.get())));
  }
  if (!builder.root) throw ParseError("feed has no root element");
  return std::move(builder.root);
}

std::string_view local_name(std::string_view qualified) {
  auto colon = qualified.rfind(':');
  return colon == std::string_view::npos ? qualified : qualified.substr(colon + 1);
}

std::string html_to_text(std::string_view html) {
  std::string s = decode_html_entities(strip_html_tags(html));
  // Escaped markup ("&lt;p&gt;") only becomes visible after the first decode.
  s = decode_html_entities(strip_html_tags(s));
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
  }
  return out;
}

struct RawEntry {
  std::string id;
  std::string title;
  std::string body;
  std::optional<Instant> published;
};

RawEntry read_rss_item(const XmlNode& item) {
  RawEntry e;
  e.title = html_to_text(item.child_text("title"));
  std::string body = item.child_text("description");
  if (body.empty()) body = item.child_text("content:encoded");
  e.body = html_to_text(body);
  e.id = item.child_text("guid");
  if (e.id.empty()) e.id = item.child_text("link");
  std::string date = item.child_text("pubDate");
  if (!date.empty()) e.published = parse_rfc822(date);
  if (!e.published) {
    std::string dc = item.child_text("dc:date");
    if (!dc.empty()) e.published = parse_iso8601(dc);
  }
  if (!e.published && !date.empty()) e.published = parse_iso8601(date);
  return e;
}

RawEntry read_atom_entry(const XmlNode& entry) {
  RawEntry e;
  std::string title, summary, content, published, updated, link;
  for (const auto& c : entry.children) {
    std::string_view n = local_name(c->name);
    if (n == "id") e.id = trim(c->text);
    else if (n == "title") title = c->text;
    else if (n == "summary") summary = c->text;
    else if (n == "content") content = c->text;
    else if (n == "published") published = trim(c->text);
    else if (n == "updated") updated = trim(c->text);
    else if (n == "link" && link.empty()) {
      auto href = c->attributes.find("href");
      if (href != c->attributes.end()) link = href->second;
    }
  }
  if (e.id.empty()) e.id = link;
  e.title = html_to_text(title);
  e.body = html_to_text(summary.empty() ? content : summary);
  if (!published.empty()) e.published = parse_iso8601(published);
  if (!e.published && !updated.empty()) e.published = parse_iso8601(updated);
  return e;
}

FeedParseResult finish(std::vector<RawEntry> entries, const std::string& source_name) {
  FeedParseResult result;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    RawEntry& e = entries[i];
    if (!e.published) {
      ++result.dropped_undated;
      continue;
    }
    if (e.id.empty()) e.id = e.title.empty() ? "entry-" + std::to_string(i) : e.title;
    if (!seen.insert(e.id).second) {
      ++result.dropped_duplicates;
      continue;
    }
    FeedStory story;
    story.source_name = source_name;
    story.story_id = std::move(e.id);
    story.title = std::move(e.title);
    story.body = std::move(e.body);
    story.published_at = *e.published;
    result.stories.push_back(std::move(story));
  }
  return result;
}

FeedParseResult parse_engine_feed(std::string_view document, const std::string& source_name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("feed JSON is invalid: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("feed JSON must be an array of news items");
  std::vector<RawEntry> entries;
  for (const auto& item : doc) {
    if (!item.is_object()) throw ParseError("feed JSON entry is not an object");
    RawEntry e;
    e.id = item.value("id", std::string());
    e.title = item.value("title", std::string());
    e.body = item.value("summary", std::string());
    std::string when = item.value("generated_at", std::string());
    if (!when.empty()) e.published = parse_iso8601(when);
    entries.push_back(std::move(e));
  }
  return finish(std::move(entries), source_name);
}

}  // namespace

FeedParseResult parse_feed(std::string_view document, const std::string& source_name) {
  std::string t = trim(document);
  if (t.empty()) return {};
  if (t.front() == '[' || t.front() == '{') return parse_engine_feed(t, source_name);

  auto root = parse_xml(document);
  std::vector<RawEntry> entries;
  std::string_view root_name = local_name(root->name);
  if (root_name == "rss" || root_name == "RDF") {
    std::vector<const XmlNode*> items;
    for (const auto& c : root->children) {
      if (c->name == "channel") {
        for (const auto& i : c->children) {
          if (i->name == "item") items.push_back(i.get());
        }
      } else if (c->name == "item") {
        items.push_back(c.get());  // RSS 1.0 keeps items beside the channel
      }
    }
    for (const XmlNode* i : items) entries.push_back(read_rss_item(*i));
  } else if (root_name == "feed") {
    for (const auto& c : root->children) {
      if (local_name(c->name) == "entry") entries.push_back(read_atom_entry(*c));
    }
  } else {
    throw ParseError("unrecognized feed root element <" + root->name + ">");
  }
  return finish(std::move(entries), source_name);
}

FeedParseResult fetch_feed(const std::string& source, const HttpClient& http) {
  if (source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0) {
    HttpResponse response = http.get(source);
    if (response.status != 200) {
      throw TransportError("feed " + source + " returned HTTP " + std::to_string(response.status),
                           response.status);
    }
    return parse_feed(response.body, parse_url(source).host);
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) throw IoError("cannot read feed " + source);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_feed(buffer.str(), std::filesystem::path(source).stem().string());
}

// ---- keywords ----

std::set<std::string> extract_keywords(std::string_view text, std::size_t n,
                                       const StopwordSet& stopwords) {
  std::map<std::string, std::size_t> frequency;
  for (auto& t : tokenize(text)) {
    if (!stopwords.contains(t)) ++frequency[std::move(t)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(frequency.begin(), frequency.end());
  // frequency is ordered alphabetically, so a stable sort keeps that as the tie-break
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::set<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < n; ++i) out.insert(ranked[i].first);
  return out;
}

void assign_keywords(std::vector<FeedStory>& stories, std::size_t n) {
  for (auto& s : stories) s.keywords = extract_keywords(s.title + " " + s.body, n);
}

std::set<std::string> extract_keywords_remote(std::string_view text, std::size_t n,
                                              const std::string& endpoint,
                                              const std::string& api_key,
                                              const HttpClient& http) {
  try {
    std::string url = endpoint;
    url += url.find('?') == std::string::npos ? '?' : '&';
    url += "SM_API_KEY=" + url_encode(api_key) + "&SM_KEYWORD_COUNT=" + std::to_string(n);
    HttpResponse response = http.post_form(url, {{"sm_api_input", std::string(text)}});
    if (response.status == 200) {
      auto doc = nlohmann::json::parse(response.body);
      auto it = doc.find("sm_api_keyword_array");
      if (it != doc.end() && it->is_array() && !it->empty()) {
        std::set<std::string> out;
        for (const auto& k : *it) {
          if (!k.is_string()) continue;
          for (auto& t : tokenize(k.get<std::string>())) out.insert(std::move(t));
        }
        if (!out.empty()) return out;
      }
    }
  } catch (const Error&) {
  } catch (const nlohmann::json::exception&) {
  }
  return extract_keywords(text, n);
}

// ---- matching ----

double match_strength(const std::set<std::string>& a, const std::set<std::string>& b,
                      MatchDenominator denominator) {
  std::size_t common = 0;
  for (const auto& k : a) common += b.count(k);
  std::size_t den = denominator == MatchDenominator::union_of_sets
                        ? a.size() + b.size() - common
                        : std::min(a.size(), b.size());
  if (den == 0) return 0.0;
  return static_cast<double>(common) / static_cast<double>(den);
}

std::string_view to_string(MatchClass c) {
  switch (c) {
    case MatchClass::none:
      return "none";
    case MatchClass::weak:
      return "weak";
    case MatchClass::strong:
      return "strong";
  }
  return "none";
}

MatchClass match_class_from_string(std::string_view s) {
  if (s == "none") return MatchClass::none;
  if (s == "weak") return MatchClass::weak;
  if (s == "strong") return MatchClass::strong;
  throw ConfigError("unknown match class '" + std::string(s) + "'");
}

MatchClass classify_match(double strength, const MatchThresholds& thresholds) {
  if (strength < thresholds.minimum) return MatchClass::none;
  if (strength <= thresholds.strong) return MatchClass::weak;
  return MatchClass::strong;
}

OverlapReport compute_overlap(const std::vector<FeedStory>& left,
                              const std::vector<FeedStory>& right,
                              const OverlapOptions& options) {
  struct Candidate {
    std::size_t l, r;
    double strength;
    MatchClass cls;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      double s = match_strength(left[i].keywords, right[j].keywords, options.denominator);
      MatchClass c = classify_match(s, options.thresholds);
      if (c == MatchClass::none || c < options.min_class) continue;
      candidates.push_back({i, j, s, c});
    }
  }
  // The ordering key is the same with the feeds swapped, so swapping the
  // inputs yields the same pairs.
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.strength != b.strength) return a.strength > b.strength;
    const std::string& al = left[a.l].story_id;
    const std::string& ar = right[a.r].story_id;
    const std::string& bl = left[b.l].story_id;
    const std::string& br = right[b.r].story_id;
    auto ka = std::minmax(al, ar);
    auto kb = std::minmax(bl, br);
    if (ka != kb) return ka < kb;
    return std::tie(al, ar) < std::tie(bl, br);
  });

  OverlapReport report;
  report.left_count = left.size();
  report.right_count = right.size();
  std::vector<bool> left_used(left.size()), right_used(right.size());
  for (const auto& c : candidates) {
    if (left_used[c.l] || right_used[c.r]) continue;
    left_used[c.l] = right_used[c.r] = true;
    const FeedStory& a = left[c.l];
    const FeedStory& b = right[c.r];
    MatchPair pair;
    pair.left = {a.source_name, a.story_id, a.title, a.published_at};
    pair.right = {b.source_name, b.story_id, b.title, b.published_at};
    pair.strength = c.strength;
    pair.classification = c.cls;
    pair.time_delta = b.published_at - a.published_at;
    report.pairs.push_back(std::move(pair));
  }
  if (!left.empty()) {
    report.overlap_pct_left = 100.0 * static_cast<double>(report.pairs.size()) /
                              static_cast<double>(left.size());
  }
  if (!right.empty()) {
    report.overlap_pct_right = 100.0 * static_cast<double>(report.pairs.size()) /
                               static_cast<double>(right.size());
  }
  return report;
}

FreshnessSummary freshness_report(const std::vector<MatchPair>& pairs) {
  FreshnessSummary out;
  if (pairs.empty()) return out;
  double sum = 0.0;
  for (const auto& p : pairs) {
    out.deltas.push_back(p.time_delta);
    sum += static_cast<double>(p.time_delta.count());
    if (p.time_delta.count() > 0) ++out.left_first;
    else if (p.time_delta.count() < 0) ++out.right_first;
    else ++out.simultaneous;
  }
  out.mean_seconds = sum / static_cast<double>(pairs.size());
  std::vector<std::int64_t> sorted;
  for (auto d : out.deltas) sorted.push_back(d.count());
  std::sort(sorted.begin(), sorted.end());
  std::size_t mid = sorted.size() / 2;
  out.median_seconds = sorted.size() % 2 == 1
                           ? static_cast<double>(sorted[mid])
                           : (static_cast<double>(sorted[mid - 1]) + static_cast<double>(sorted[mid])) / 2.0;
  return out;
}

std::string benchmark_report_json(const OverlapReport& overlap, const FreshnessSummary& freshness) {
  nlohmann::ordered_json doc;
  doc["left_count"] = overlap.left_count;
  doc["right_count"] = overlap.right_count;
  doc["matched"] = overlap.pairs.size();
  doc["overlap_pct_left"] = overlap.overlap_pct_left;
  doc["overlap_pct_right"] = overlap.overlap_pct_right;
  doc["pairs"] = nlohmann::ordered_json::array();
  for (const auto& p : overlap.pairs) {
    nlohmann::ordered_json j;
    j["left"] = {{"source", p.left.source_name}, {"id", p.left.story_id},
                 {"title", p.left.title}, {"published_at", format_iso8601(p.left.published_at)}};
    j["right"] = {{"source", p.right.source_name}, {"id", p.right.story_id},
                  {"title", p.right.title},
                  {"published_at", format_iso8601(p.right.published_at)}};
    j["strength"] = p.strength;
    j["classification"] = std::string(to_string(p.classification));
    j["time_delta_seconds"] = p.time_delta.count();
    doc["pairs"].push_back(std::move(j));
  }
  doc["freshness"] = {{"mean_seconds", freshness.mean_seconds},
                      {"median_seconds", freshness.median_seconds},
                      {"left_first", freshness.left_first},
                      {"right_first", freshness.right_first},
                      {"simultaneous", freshness.simultaneous}};
  return doc.dump(2);
}

std::string benchmark_report_table(const OverlapReport& overlap,
                                   const FreshnessSummary& freshness) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "left stories: %zu  right stories: %zu  matched: %zu\n",
                overlap.left_count, overlap.right_count, overlap.pairs.size());
  out << line;
  std::snprintf(line, sizeof(line), "overlap: left %.1f%%  right %.1f%%\n", overlap.overlap_pct_left,
                overlap.overlap_pct_right);
  out << line;
  out << "strength  class   delta(h)  left | right\n";
  for (const auto& p : overlap.pairs) {
    std::snprintf(line, sizeof(line), "%8.3f  %-6s  %+8.2f  ", p.strength,
                  std::string(to_string(p.classification)).c_str(),
                  static_cast<double>(p.time_delta.count()) / 3600.0);
    out << line << p.left.title << " | " << p.right.title << '\n';
  }
  std::snprintf(line, sizeof(line),
                "freshness: mean %+.2f h  median %+.2f h  left first %zu  right first %zu  "
                "simultaneous %zu\n",
                freshness.mean_seconds / 3600.0, freshness.median_seconds / 3600.0,
                freshness.left_first, freshness.right_first, freshness.simultaneous);
  out << line;
  return out.str();
}

}  // namespace editwire
