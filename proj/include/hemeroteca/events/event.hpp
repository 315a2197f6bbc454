#pragma once

#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hemeroteca/common/partial_date.hpp"
#include "hemeroteca/geo/gazetteer.hpp"
#include "hemeroteca/query/expr.hpp"

namespace hemeroteca::events {

struct ScopePoint {
    std::string location;
    double lon = 0.0;
    double lat = 0.0;
    std::string country;

    geo::GeoPoint point() const { return {lat, lon}; }
    friend bool operator==(const ScopePoint&, const ScopePoint&) = default;
};

/// What is known about one physical attribute of an event. Numeric
/// attributes are intervals so that rule-implied bounds ("wind above 118")
/// and reported values ("wind 80", low == high) share one representation.
/// river_state uses `labels`.
struct Measurement {
    double low = -std::numeric_limits<double>::infinity();
    double high = std::numeric_limits<double>::infinity();
    bool low_open = false;
    bool high_open = false;
    std::vector<std::string> labels;
    /// Empty for reported values, otherwise the id of the inferring rule.
    std::string inferred_by_rule;

    static Measurement reported(double value);
    static Measurement reported_label(std::string label);
    /// The set of values a constraint admits, as a measurement.
    static Measurement from_constraint(const query::Constraint& c, std::string rule_id);

    bool is_reported() const { return inferred_by_rule.empty(); }
    /// True when some value compatible with this measurement satisfies `c`.
    bool may_satisfy(const query::Constraint& c) const;
    friend bool operator==(const Measurement&, const Measurement&) = default;
};

struct ClimateEvent {
    std::string id;
    PartialDate date;
    std::optional<DateRange> duration;
    std::vector<ScopePoint> scope;
    std::optional<std::string> name;
    std::set<std::string> damages;
    std::set<std::string> terms;  // validated trigger terms
    std::map<query::Attribute, Measurement> attributes;
    std::set<std::string> articles;

    /// The duration when given, otherwise the span of `date`.
    DateRange time_span() const { return duration.value_or(DateRange::of(date)); }
    friend bool operator==(const ClimateEvent&, const ClimateEvent&) = default;
};

/// Throws Error(ValidationFailed) listing every violated invariant.
void validate(const ClimateEvent& e);

/// Tests a constraint against the event. Attribute constraints follow
/// Measurement::may_satisfy; reach constraints hold when some scope point
/// lies at a distance from the anchor accepted by the constraint.
bool satisfies(const ClimateEvent& e, const query::Constraint& c);

nlohmann::json to_json(const ClimateEvent& e);
ClimateEvent event_from_json(const nlohmann::json& j);

}  // namespace hemeroteca::events
