#include "hemeroteca/events/event.hpp"

#include <algorithm>
#include <cmath>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::events {

using nlohmann::json;
using query::Attribute;
using query::Comparator;

Measurement Measurement::reported(double value) {
    Measurement m;
    m.low = m.high = value;
    return m;
}

Measurement Measurement::reported_label(std::string label) {
    Measurement m;
    m.labels.push_back(text::normalize_phrase(label));
    return m;
}

Measurement Measurement::from_constraint(const query::Constraint& c, std::string rule_id) {
    Measurement m;
    m.inferred_by_rule = std::move(rule_id);
    if (!c.labels.empty()) {
        for (const auto& l : c.labels) m.labels.push_back(text::normalize_phrase(l));
        return m;
    }
    switch (c.op) {
        case Comparator::Greater: m.low = c.value; m.low_open = true; break;
        case Comparator::GreaterEq: m.low = c.value; break;
        case Comparator::Less: m.high = c.value; m.high_open = true; break;
        case Comparator::LessEq: m.high = c.value; break;
        case Comparator::Equal: m.low = m.high = c.value; break;
        case Comparator::Between: m.low = c.value; m.high = c.upper; break;
        case Comparator::OneOf: break;
    }
    return m;
}

bool Measurement::may_satisfy(const query::Constraint& c) const {
    if (!c.labels.empty() || c.op == Comparator::OneOf) {
        return std::any_of(c.labels.begin(), c.labels.end(), [&](const std::string& l) {
            return std::find(labels.begin(), labels.end(), text::normalize_phrase(l)) != labels.end();
        });
    }
    if (!labels.empty()) return false;
    // Intersect [low, high] (with open ends) with the constraint's range.
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_open = false;
    bool hi_open = false;
    switch (c.op) {
        case Comparator::Greater: lo = c.value; lo_open = true; break;
        case Comparator::GreaterEq: lo = c.value; break;
        case Comparator::Less: hi = c.value; hi_open = true; break;
        case Comparator::LessEq: hi = c.value; break;
        case Comparator::Equal: lo = hi = c.value; break;
        case Comparator::Between: lo = c.value; hi = c.upper; break;
        case Comparator::OneOf: return false;
    }
    const double a = std::max(low, lo);
    const double b = std::min(high, hi);
    if (a < b) return true;
    if (a > b) return false;
    const bool a_open = (a == low && low_open) || (a == lo && lo_open);
    const bool b_open = (b == high && high_open) || (b == hi && hi_open);
    return !a_open && !b_open && std::isfinite(a);
}

void validate(const ClimateEvent& e) {
    std::vector<std::string> problems;
    if (e.id.empty()) problems.emplace_back("id is empty");
    if (e.scope.empty()) problems.emplace_back("scope is empty");
    for (const auto& p : e.scope)
        if (p.lat < -90 || p.lat > 90 || p.lon < -180 || p.lon > 180)
            problems.push_back("scope point out of range: " + p.location);
    if (e.duration) {
        if (e.duration->first_day() > e.duration->last_day()) problems.emplace_back("duration init after end");
        else if (!e.duration->contains(e.date)) problems.emplace_back("date outside duration");
    }
    for (const auto& [attr, m] : e.attributes)
        if (m.low > m.high) problems.push_back("empty interval for " + std::string(query::attribute_name(attr)));
    if (!problems.empty()) throw Error(ErrorCode::ValidationFailed, "invalid event: " + text::join(problems, "; "), problems);
}

bool satisfies(const ClimateEvent& e, const query::Constraint& c) {
    if (c.attribute == Attribute::ReachKm) {
        if (!c.anchor) return false;
        const geo::GeoPoint anchor{c.anchor->lat, c.anchor->lon};
        return std::any_of(e.scope.begin(), e.scope.end(),
                           [&](const ScopePoint& p) { return c.accepts(geo::distance_km(anchor, p.point())); });
    }
    auto it = e.attributes.find(c.attribute);
    return it != e.attributes.end() && it->second.may_satisfy(c);
}

namespace {

json bound(double v) {
    if (std::isinf(v)) return nullptr;
    return v;
}

double bound_from(const json& j, const char* key, double missing) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return missing;
    return it->get<double>();
}

json to_json(const Measurement& m) {
    json j;
    if (!m.labels.empty()) {
        j["labels"] = m.labels;
    } else {
        j["low"] = bound(m.low);
        j["high"] = bound(m.high);
        if (m.low_open) j["low_open"] = true;
        if (m.high_open) j["high_open"] = true;
    }
    if (m.is_reported()) {
        j["provenance"] = "reported";
    } else {
        j["provenance"] = "inferred_by_rule";
        j["rule"] = m.inferred_by_rule;
    }
    return j;
}

Measurement measurement_from_json(const json& j) {
    Measurement m;
    if (auto it = j.find("labels"); it != j.end()) m.labels = it->get<std::vector<std::string>>();
    m.low = bound_from(j, "low", -std::numeric_limits<double>::infinity());
    m.high = bound_from(j, "high", std::numeric_limits<double>::infinity());
    m.low_open = j.value("low_open", false);
    m.high_open = j.value("high_open", false);
    const auto prov = j.value("provenance", std::string("reported"));
    if (prov == "inferred_by_rule") {
        m.inferred_by_rule = j.at("rule").get<std::string>();
        if (m.inferred_by_rule.empty()) throw Error(ErrorCode::ValidationFailed, "inferred attribute without rule id");
    } else if (prov != "reported") {
        throw Error(ErrorCode::ValidationFailed, "unknown provenance: " + prov);
    }
    return m;
}

}  // namespace

json to_json(const ClimateEvent& e) {
    json scope = json::array();
    for (const auto& p : e.scope)
        scope.push_back({{"locationName", p.location}, {"long", p.lon}, {"lat", p.lat}, {"country", p.country}});
    json attrs = json::object();
    for (const auto& [a, m] : e.attributes) attrs[std::string(query::attribute_name(a))] = to_json(m);
    json j{{"id", e.id}, {"date", e.date.to_string()}, {"scope", scope}};
    if (e.duration) j["duration"] = {{"init", e.duration->start.to_string()}, {"end", e.duration->end.to_string()}};
    j["name"] = e.name ? json(*e.name) : json(nullptr);
    j["damages"] = e.damages;
    j["terms"] = e.terms;
    j["attributes"] = attrs;
    j["articles"] = e.articles;
    return j;
}

ClimateEvent event_from_json(const json& j) {
    try {
        ClimateEvent e;
        e.id = j.at("id").get<std::string>();
        e.date = PartialDate::parse(j.at("date").get<std::string>());
        if (auto it = j.find("duration"); it != j.end() && !it->is_null())
            e.duration = DateRange{PartialDate::parse(it->at("init").get<std::string>()),
                                   PartialDate::parse(it->at("end").get<std::string>())};
        for (const auto& p : j.at("scope"))
            e.scope.push_back({p.at("locationName").get<std::string>(), p.at("long").get<double>(),
                               p.at("lat").get<double>(), p.value("country", std::string{})});
        if (auto it = j.find("name"); it != j.end() && !it->is_null()) e.name = it->get<std::string>();
        if (auto it = j.find("damages"); it != j.end()) e.damages = it->get<std::set<std::string>>();
        if (auto it = j.find("terms"); it != j.end()) e.terms = it->get<std::set<std::string>>();
        if (auto it = j.find("attributes"); it != j.end()) {
            for (const auto& [k, v] : it->items()) {
                const auto a = query::parse_attribute(k);
                if (!a) throw Error(ErrorCode::ValidationFailed, "unknown attribute: " + k);
                e.attributes[*a] = measurement_from_json(v);
            }
        }
        if (auto it = j.find("articles"); it != j.end()) e.articles = it->get<std::set<std::string>>();
        return e;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::ValidationFailed, std::string("malformed event record: ") + ex.what());
    }
}

}  // namespace hemeroteca::events
