#include "hemeroteca/service/params.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/geo/gazetteer.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::service {

using nlohmann::json;

namespace {

Error bad_param(const std::string& key, const std::string& value, const std::string& why) {
    return Error(ErrorCode::ValidationFailed, "parameter \"" + key + "\" " + why, {key, value});
}

}  // namespace

std::optional<std::string> optional_param(const Params& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

std::size_t size_param(const Params& p, const std::string& key, std::size_t fallback) {
    const auto v = optional_param(p, key);
    if (!v) return fallback;
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), n);
    if (ec != std::errc{} || ptr != v->data() + v->size()) throw bad_param(key, *v, "must be a non-negative integer");
    return n;
}

double double_param(const Params& p, const std::string& key, double fallback) {
    const auto v = optional_param(p, key);
    if (!v) return fallback;
    try {
        std::size_t used = 0;
        const double d = std::stod(*v, &used);
        if (used != v->size()) throw std::invalid_argument(*v);
        return d;
    } catch (const std::exception&) {
        throw bad_param(key, *v, "must be a number");
    }
}

std::vector<std::string> list_param(const Params& p, const std::string& key) {
    std::vector<std::string> out;
    const auto v = optional_param(p, key);
    if (!v) return out;
    std::istringstream in(*v);
    std::string part;
    while (std::getline(in, part, ','))
        if (auto t = text::trim(part); !t.empty()) out.push_back(std::move(t));
    return out;
}

std::optional<DateRange> date_range_from(const Params& p) {
    if (const auto d = optional_param(p, "date")) {
        auto r = parse_date_expression(*d);
        if (!r) throw bad_param("date", *d, "is not a date expression");
        return r;
    }
    const auto from = optional_param(p, "from");
    const auto to = optional_param(p, "to");
    if (!from && !to) return std::nullopt;
    auto parse = [](const std::string& key, const std::string& v) {
        auto d = PartialDate::try_parse(v);
        if (!d) throw bad_param(key, v, "must be YYYY, YYYY-MM or YYYY-MM-DD");
        return *d;
    };
    DateRange r{from ? parse("from", *from) : PartialDate(1), to ? parse("to", *to) : PartialDate(9999)};
    if (r.first_day() > r.last_day()) throw bad_param("from", from.value_or(""), "is after \"to\"");
    return r;
}

corpus::ArticleFilter article_filter_from(const Params& p) {
    corpus::ArticleFilter f;
    f.country = optional_param(p, "country");
    f.date_range = date_range_from(p);
    f.newspaper = optional_param(p, "newspaper");
    return f;
}

events::EventFilter event_filter_from(const Params& p) {
    events::EventFilter f;
    f.country = optional_param(p, "country");
    if (const auto b = optional_param(p, "bbox")) f.bbox = events::BBox::parse(*b);
    const bool has_lat = p.contains("lat"), has_lon = p.contains("lon");
    if (has_lat != has_lon) throw Error(ErrorCode::ValidationFailed, "lat and lon go together", {"lat", "lon"});
    if (has_lat) f.center = geo::GeoPoint{double_param(p, "lat", 0), double_param(p, "lon", 0)};
    if (p.contains("radius_km")) f.radius_km = double_param(p, "radius_km", 0);
    f.time_range = date_range_from(p);
    f.name = optional_param(p, "name");
    f.damage_term = optional_param(p, "damage");
    f.validate();
    return f;
}

curation::TaskFilter task_filter_from(const Params& p) {
    curation::TaskFilter f;
    if (const auto s = optional_param(p, "status")) {
        f.status = curation::parse_status(*s);
        if (!f.status) throw bad_param("status", *s, "must be pending, in_review, confirmed or rejected");
    }
    f.country = optional_param(p, "country");
    f.article_id = optional_param(p, "article_id");
    return f;
}

std::vector<DateRange> buckets_from(const Params& p) {
    const auto from = static_cast<int>(size_param(p, "from", 1800));
    const auto to = static_cast<int>(size_param(p, "to", 1900));
    const auto width = static_cast<int>(size_param(p, "width", 10));
    return events::year_buckets(from, to, width);
}

query::RewriteOptions rewrite_options_from(const json& body, const geo::Gazetteer& gazetteer) {
    query::RewriteOptions o;
    o.extend = body.value("extend", false);
    if (body.value("paper_literal", false)) o.extend_options.mode = query::HypernymMode::Conjunctive;
    o.extend_options.depth = body.value("depth", 1);
    if (auto it = body.find("localize"); it != body.end() && !it->is_null()) {
        if (it->is_string()) o.localize.push_back(it->get<std::string>());
        else o.localize = it->get<std::vector<std::string>>();
    }
    o.rules = body.value("rules", false);
    if (auto it = body.find("geo"); it != body.end() && it->is_string()) {
        o.geo = query::parse_geo_context(it->get<std::string>(), gazetteer);
        o.rules = true;
    }
    return o;
}

json tf_to_json(const vocab::TermFrequencyMatrix& m, std::size_t max_terms) {
    const auto top = vocab::top_terms(m, max_terms);
    std::vector<std::size_t> cols;
    for (const auto& [term, n] : top)
        cols.push_back(static_cast<std::size_t>(std::lower_bound(m.terms.begin(), m.terms.end(), term) - m.terms.begin()));
    std::sort(cols.begin(), cols.end());

    const auto norm = vocab::normalized_rows(m);
    json terms = json::array(), counts = json::array(), normalized = json::array();
    for (auto c : cols) terms.push_back(m.terms[c]);
    for (std::size_t d = 0; d < m.docs.size(); ++d) {
        json row = json::array(), nrow = json::array();
        for (auto c : cols) {
            row.push_back(m.at(d, c));
            nrow.push_back(norm[d * m.terms.size() + c]);
        }
        counts.push_back(std::move(row));
        normalized.push_back(std::move(nrow));
    }
    json top_json = json::array();
    for (const auto& [term, n] : top) top_json.push_back({{"term", term}, {"count", n}});
    return {{"docs", m.docs},         {"doc_lengths", m.doc_lengths}, {"terms", terms},
            {"counts", counts},       {"normalized", normalized},     {"top", top_json},
            {"vocabulary_size", m.terms.size()}};
}

}  // namespace hemeroteca::service
