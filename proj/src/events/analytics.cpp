#include "hemeroteca/events/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/text/tokenizer.hpp"
#include "hemeroteca/vocab/vocabulary.hpp"

namespace hemeroteca::events {

using nlohmann::json;

namespace {

std::vector<std::string> shadow_words(std::string_view phrase) {
    std::vector<std::string> out;
    for (const auto& w : text::phrase_words(phrase)) out.push_back(text::shadow_key(w));
    return out;
}

bool contains_run(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > hay.size()) return false;
    return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

std::uint64_t count_runs(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > hay.size()) return 0;
    std::uint64_t n = 0;
    for (std::size_t i = 0; i + needle.size() <= hay.size(); ++i)
        if (std::equal(needle.begin(), needle.end(), hay.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
    return n;
}

bool earlier(const ClimateEvent& a, const ClimateEvent& b) {
    const auto da = a.time_span().first_day();
    const auto db = b.time_span().first_day();
    if (da != db) return da < db;
    return a.id < b.id;
}

}  // namespace

DateRange late_nineteenth_century() { return DateRange::years(1890, 1900); }

void BBox::validate() const {
    if (min_lat < -90 || max_lat > 90 || min_lon < -180 || max_lon > 180)
        throw Error(ErrorCode::ValidationFailed, "bbox out of range");
    if (min_lat > max_lat || min_lon > max_lon)
        throw Error(ErrorCode::ValidationFailed, "bbox minimum exceeds maximum");
}

BBox BBox::parse(std::string_view s) {
    std::vector<double> v;
    std::string part;
    std::istringstream in{std::string(s)};
    while (std::getline(in, part, ',')) {
        try {
            std::size_t used = 0;
            const auto t = text::trim(part);
            v.push_back(std::stod(t, &used));
            if (used != t.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw Error(ErrorCode::ValidationFailed, "bbox must be four numbers: min_lat,min_lon,max_lat,max_lon");
        }
    }
    if (v.size() != 4) throw Error(ErrorCode::ValidationFailed, "bbox must be four numbers: min_lat,min_lon,max_lat,max_lon");
    BBox b{v[0], v[1], v[2], v[3]};
    b.validate();
    return b;
}

void EventFilter::validate() const {
    if (bbox) bbox->validate();
    if (radius_km && !center) throw Error(ErrorCode::ValidationFailed, "radius requires a center");
    if (radius_km && *radius_km < 0) throw Error(ErrorCode::ValidationFailed, "radius must be non-negative");
    if (center && (center->lat < -90 || center->lat > 90 || center->lon < -180 || center->lon > 180))
        throw Error(ErrorCode::ValidationFailed, "center out of range");
}

bool EventFilter::matches(const ClimateEvent& e) const {
    if (country && std::none_of(e.scope.begin(), e.scope.end(), [&](const ScopePoint& p) { return p.country == *country; }))
        return false;
    if (bbox && std::none_of(e.scope.begin(), e.scope.end(), [&](const ScopePoint& p) { return bbox->contains(p.point()); }))
        return false;
    if (center && radius_km &&
        std::none_of(e.scope.begin(), e.scope.end(),
                     [&](const ScopePoint& p) { return geo::distance_km(*center, p.point()) <= *radius_km; }))
        return false;
    if (time_range && !time_range->intersects(e.time_span())) return false;
    if (name) {
        if (!e.name || text::shadow_key(text::normalize_phrase(*e.name)) != text::shadow_key(text::normalize_phrase(*name)))
            return false;
    }
    if (damage_term) {
        const auto needle = shadow_words(*damage_term);
        if (std::none_of(e.damages.begin(), e.damages.end(),
                         [&](const std::string& d) { return contains_run(shadow_words(d), needle); }))
            return false;
    }
    return true;
}

std::vector<ClimateEvent> query_events(std::span<const ClimateEvent> events, const EventFilter& filter) {
    filter.validate();
    std::vector<ClimateEvent> out;
    for (const auto& e : events)
        if (filter.matches(e)) out.push_back(e);
    std::sort(out.begin(), out.end(), earlier);
    return out;
}

std::vector<std::pair<ClimateEvent, std::size_t>> most_reported(std::span<const ClimateEvent> events,
                                                                 const EventFilter& filter, std::size_t k) {
    std::vector<std::pair<ClimateEvent, std::size_t>> ranked;
    for (auto& e : query_events(events, filter)) {
        const auto n = e.articles.size();
        ranked.emplace_back(std::move(e), n);
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (ranked.size() > k) ranked.resize(k);
    return ranked;
}

int HeatmapGrid::rows() const {
    return std::max(1, static_cast<int>(std::ceil((bbox.max_lat - bbox.min_lat) / cell_deg - 1e-9)));
}

int HeatmapGrid::cols() const {
    return std::max(1, static_cast<int>(std::ceil((bbox.max_lon - bbox.min_lon) / cell_deg - 1e-9)));
}

std::uint64_t HeatmapGrid::total() const {
    std::uint64_t t = 0;
    for (const auto& [cell, n] : cells) t += n;
    return t;
}

std::optional<std::pair<int, int>> HeatmapGrid::cell_of(geo::GeoPoint p) const {
    if (!bbox.contains(p)) return std::nullopt;
    const int r = std::min(rows() - 1, static_cast<int>(std::floor((p.lat - bbox.min_lat) / cell_deg)));
    const int c = std::min(cols() - 1, static_cast<int>(std::floor((p.lon - bbox.min_lon) / cell_deg)));
    return std::pair{r, c};
}

namespace {

HeatmapGrid empty_grid(double cell_deg, const BBox& bbox) {
    if (!(cell_deg > 0)) throw Error(ErrorCode::ValidationFailed, "cell size must be positive");
    bbox.validate();
    HeatmapGrid g;
    g.bbox = bbox;
    g.cell_deg = cell_deg;
    return g;
}

std::set<std::pair<int, int>> cells_of(const HeatmapGrid& g, const ClimateEvent& e) {
    std::set<std::pair<int, int>> cells;
    for (const auto& p : e.scope)
        if (auto c = g.cell_of(p.point())) cells.insert(*c);
    return cells;
}

}  // namespace

HeatmapGrid heatmap(std::span<const ClimateEvent> events, double cell_deg, const BBox& bbox) {
    HeatmapGrid g = empty_grid(cell_deg, bbox);
    const auto n = static_cast<std::ptrdiff_t>(events.size());
#pragma omp parallel
    {
        std::map<std::pair<int, int>, std::uint32_t> local;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i)
            for (const auto& c : cells_of(g, events[static_cast<std::size_t>(i)])) ++local[c];
#pragma omp critical
        for (const auto& [c, k] : local) g.cells[c] += k;
    }
    return g;
}

HeatmapGrid heatmap_serial(std::span<const ClimateEvent> events, double cell_deg, const BBox& bbox) {
    HeatmapGrid g = empty_grid(cell_deg, bbox);
    for (const auto& e : events)
        for (const auto& c : cells_of(g, e)) ++g.cells[c];
    return g;
}

json export_heatmap(const HeatmapGrid& g) {
    json features = json::array();
    for (const auto& [cell, count] : g.cells) {
        const auto [r, c] = cell;
        const double lat0 = g.bbox.min_lat + r * g.cell_deg;
        const double lon0 = g.bbox.min_lon + c * g.cell_deg;
        const double lat1 = std::min(g.bbox.max_lat, lat0 + g.cell_deg);
        const double lon1 = std::min(g.bbox.max_lon, lon0 + g.cell_deg);
        features.push_back({{"type", "Feature"},
                            {"geometry",
                             {{"type", "Polygon"},
                              {"coordinates", json::array({json::array({json::array({lon0, lat0}), json::array({lon1, lat0}),
                                                                        json::array({lon1, lat1}), json::array({lon0, lat1}),
                                                                        json::array({lon0, lat0})})})}}},
                            {"properties", {{"row", r}, {"col", c}, {"count", count}}}});
    }
    return {{"type", "FeatureCollection"},
            {"bbox", {g.bbox.min_lon, g.bbox.min_lat, g.bbox.max_lon, g.bbox.max_lat}},
            {"cell_deg", g.cell_deg},
            {"features", features}};
}

std::string export_events(std::span<const ClimateEvent> events, std::string_view format) {
    std::vector<const ClimateEvent*> sorted;
    for (const auto& e : events) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
    if (format == "jsonl") {
        std::string out;
        for (const auto* e : sorted) out += to_json(*e).dump() + "\n";
        return out;
    }
    if (format == "geojson") {
        json features = json::array();
        for (const auto* e : sorted) {
            json coords = json::array();
            for (const auto& p : e->scope) coords.push_back({p.lon, p.lat});
            auto props = to_json(*e);
            props.erase("scope");
            json places = json::array();
            for (const auto& p : e->scope) places.push_back({{"locationName", p.location}, {"country", p.country}});
            props["places"] = places;
            features.push_back({{"type", "Feature"},
                                {"id", e->id},
                                {"geometry", {{"type", "MultiPoint"}, {"coordinates", coords}}},
                                {"properties", props}});
        }
        return json{{"type", "FeatureCollection"}, {"features", features}}.dump(2) + "\n";
    }
    throw Error(ErrorCode::ValidationFailed, "unsupported export format '" + std::string(format) + "' (use jsonl or geojson)");
}

std::vector<ClimateEvent> import_events(std::string_view jsonl) {
    std::vector<ClimateEvent> out;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(event_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ValidationFailed, "event line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<DateRange> year_buckets(int first_year, int last_year, int width) {
    if (width <= 0) throw Error(ErrorCode::ValidationFailed, "bucket width must be positive");
    if (first_year > last_year) throw Error(ErrorCode::ValidationFailed, "bucket range is empty");
    std::vector<DateRange> out;
    for (int y = first_year; y <= last_year; y += width) out.push_back(DateRange::years(y, std::min(last_year, y + width - 1)));
    return out;
}

TermEvolution term_evolution(std::span<const corpus::Article> articles, const vocab::Vocabulary& vocab,
                             std::string_view concept_term, const std::vector<DateRange>& buckets,
                             std::vector<std::string> countries) {
    TermEvolution evo;
    evo.concept_term = text::normalize_phrase(concept_term);
    evo.buckets = buckets;
    if (countries.empty()) {
        const auto s = vocab.supported_countries();
        countries.assign(s.begin(), s.end());
    }
    std::vector<std::vector<std::string>> words(articles.size());
    for (std::size_t i = 0; i < articles.size(); ++i) words[i] = text::normalized_words(articles[i].raw_text);

    for (const auto& country : countries) {
        EvolutionSeries s;
        s.country = country;
        std::set<std::string> terms{evo.concept_term};
        for (const auto& t : vocab.cultural_equivalents(evo.concept_term, country)) terms.insert(t);
        s.terms.assign(terms.begin(), terms.end());
        s.totals.assign(buckets.size(), 0);
        for (const auto& t : s.terms) s.per_term[t].assign(buckets.size(), 0);
        for (std::size_t i = 0; i < articles.size(); ++i) {
            if (articles[i].newspaper.country != country) continue;
            const auto b = std::find_if(buckets.begin(), buckets.end(),
                                        [&](const DateRange& r) { return r.contains(articles[i].publication_date); });
            if (b == buckets.end()) continue;
            const auto bi = static_cast<std::size_t>(b - buckets.begin());
            for (const auto& t : s.terms) {
                const auto n = count_runs(words[i], text::phrase_words(t));
                s.per_term[t][bi] += n;
                s.totals[bi] += n;
            }
        }
        evo.series.push_back(std::move(s));
    }
    return evo;
}

json to_json(const TermEvolution& evo) {
    json buckets = json::array();
    for (const auto& b : evo.buckets) buckets.push_back(b.to_string());
    json series = json::array();
    for (const auto& s : evo.series)
        series.push_back({{"country", s.country}, {"terms", s.terms}, {"totals", s.totals}, {"per_term", s.per_term}});
    return {{"concept", evo.concept_term}, {"buckets", buckets}, {"series", series}};
}

ClimateEvent infer_attributes(ClimateEvent event, std::span<const query::DomainRule> rules) {
    std::vector<std::vector<std::string>> phrases;
    for (const auto& t : event.terms) phrases.push_back(text::phrase_words(t));
    for (const auto& d : event.damages) phrases.push_back(text::phrase_words(d));
    for (const auto& rule : rules) {
        const bool fires = std::any_of(phrases.begin(), phrases.end(), [&](const auto& p) {
            return query::phrase_matches_trigger(p, rule.trigger);
        });
        if (!fires) continue;
        for (const auto& imp : rule.implications) {
            const auto attr = imp.constraint.attribute;
            if (attr == query::Attribute::ReachKm || event.attributes.contains(attr)) continue;
            if (imp.when && !satisfies(event, *imp.when)) continue;
            event.attributes.emplace(attr, Measurement::from_constraint(imp.constraint, rule.id));
        }
    }
    return event;
}

}  // namespace hemeroteca::events
