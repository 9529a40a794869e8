#pragma once

#include <string>
#include <vector>

#include "editwire/graph_store.hpp"

namespace editwire {

/// One feed entry, fields in the order id, page_id, title, summary,
/// categories, generated_at, updated_at, final_rank, rank_breakdown,
/// source_revision_ids.
std::string news_item_json(const NewsItem& item, int indent = 2);

/// JSON array of entries, pretty-printed with two-space indent and a
/// trailing newline. Byte-stable for equal input.
std::string feed_json(const std::vector<NewsItem>& items);

std::string run_report_json(const RunReport& report, int indent = 2);

/// The whole news list of `store` in feed order.
std::string export_feed(const GraphStore& store);

}  // namespace editwire
