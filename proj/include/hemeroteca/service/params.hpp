#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hemeroteca/corpus/article.hpp"
#include "hemeroteca/curation/queue.hpp"
#include "hemeroteca/events/analytics.hpp"
#include "hemeroteca/query/rewrite.hpp"
#include "hemeroteca/vocab/term_frequency.hpp"

namespace hemeroteca::geo {
class Gazetteer;
}

/// Request-parameter parsing shared by the HTTP endpoints and the CLI, so
/// both surfaces interpret filters identically.
namespace hemeroteca::service {

using Params = std::map<std::string, std::string>;

std::optional<std::string> optional_param(const Params& p, const std::string& key);
std::size_t size_param(const Params& p, const std::string& key, std::size_t fallback);
double double_param(const Params& p, const std::string& key, double fallback);
/// Comma-separated values; empty when absent.
std::vector<std::string> list_param(const Params& p, const std::string& key);

/// "date" as a date expression ("1800-1810", "1805-06", "siglo XIX"), or
/// "from" and/or "to" as partial dates.
std::optional<DateRange> date_range_from(const Params& p);

/// country, date|from|to, newspaper.
corpus::ArticleFilter article_filter_from(const Params& p);
/// country, bbox, lat+lon, radius_km, date|from|to, name, damage.
events::EventFilter event_filter_from(const Params& p);
/// status (pending|in_review|confirmed|rejected), country, article_id.
curation::TaskFilter task_filter_from(const Params& p);
/// from, to (years) and width (default 10).
std::vector<DateRange> buckets_from(const Params& p);

/// Body fields: extend, paper_literal, depth, localize (code or list, "*"
/// for all), rules, geo ("<place>, <radius km>").
query::RewriteOptions rewrite_options_from(const nlohmann::json& body, const geo::Gazetteer& gazetteer);

/// Matrix restricted to the `max_terms` most frequent terms, with raw and
/// row-normalized grids and the full-vocabulary top list.
nlohmann::json tf_to_json(const vocab::TermFrequencyMatrix& m, std::size_t max_terms);

}  // namespace hemeroteca::service
