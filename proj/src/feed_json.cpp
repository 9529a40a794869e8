#include "editwire/feed_json.hpp"

#include "json.hpp"

namespace editwire {

namespace {

using ordered = nlohmann::ordered_json;

ordered to_json(const NewsItem& item) {
  ordered j;
  j["id"] = item.item_id;
  j["page_id"] = item.page_id;
  j["title"] = item.title;
  j["summary"] = item.summary;
  j["categories"] = item.categories;
  j["generated_at"] = format_iso8601(item.generated_at);
  j["updated_at"] = format_iso8601(item.updated_at);
  j["final_rank"] = item.final_rank;
  ordered breakdown = ordered::object();
  for (const auto& [name, c] : item.rank_breakdown) {
    ordered entry;
    entry["value"] = c.value;
    entry["weight"] = c.weight;
    breakdown[name] = std::move(entry);
  }
  j["rank_breakdown"] = std::move(breakdown);
  j["source_revision_ids"] = item.source_revision_ids;
  return j;
}

}  // namespace

std::string news_item_json(const NewsItem& item, int indent) { return to_json(item).dump(indent); }

std::string feed_json(const std::vector<NewsItem>& items) {
  ordered arr = ordered::array();
  for (const auto& item : items) arr.push_back(to_json(item));
  return arr.dump(2) + "\n";
}

std::string run_report_json(const RunReport& report, int indent) {
  ordered j;
  j["run_id"] = report.run_id;
  j["started_at"] = format_iso8601(report.started_at);
  j["finished_at"] = format_iso8601(report.finished_at);
  j["pages_considered"] = report.pages_considered;
  j["pages_selected"] = report.pages_selected;
  j["news_created"] = report.news_created;
  j["news_updated"] = report.news_updated;
  j["degradations"] = report.degradations;
  return j.dump(indent);
}

std::string export_feed(const GraphStore& store) { return feed_json(store.list_news()); }

}  // namespace editwire
