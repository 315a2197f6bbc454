#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hemeroteca::query {

enum class Attribute { WindSpeedKmh, RainMmh, ReachKm, RiverState };
enum class Comparator { Greater, GreaterEq, Less, LessEq, Equal, Between, OneOf };

std::string_view attribute_name(Attribute a) noexcept;
std::optional<Attribute> parse_attribute(std::string_view s) noexcept;
std::string_view comparator_symbol(Comparator c) noexcept;
std::optional<Comparator> parse_comparator(std::string_view s) noexcept;

/// Reference point for reach constraints.
struct GeoAnchor {
    std::string place;
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const GeoAnchor&, const GeoAnchor&) = default;
};

/// Attribute test evaluated against curated events, e.g. wind_speed_kmh > 118.
/// Between uses [value, upper]; OneOf and label equality use `labels`.
struct Constraint {
    Attribute attribute = Attribute::WindSpeedKmh;
    Comparator op = Comparator::Greater;
    double value = 0.0;
    double upper = 0.0;
    std::vector<std::string> labels;
    std::string unit;
    std::optional<GeoAnchor> anchor;

    /// Numeric test of a single value (labels ignored).
    bool accepts(double x) const noexcept;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Boolean keyword query tree. And/Or hold at least two children after
/// canonicalization; Term holds a non-empty normalized phrase.
struct QueryExpr {
    enum class Kind { And, Or, Term, Constraint };

    Kind kind = Kind::Term;
    std::vector<QueryExpr> children;
    std::vector<std::string> phrase;
    std::optional<query::Constraint> constraint;

    static QueryExpr term(std::vector<std::string> words);
    /// Normalizes the words of `phrase`.
    static QueryExpr term(std::string_view phrase);
    static QueryExpr all_of(std::vector<QueryExpr> children);
    static QueryExpr any_of(std::vector<QueryExpr> children);
    static QueryExpr with(query::Constraint c);

    bool is_term() const { return kind == Kind::Term; }
    bool is_constraint() const { return kind == Kind::Constraint; }
    std::string phrase_text() const;

    friend bool operator==(const QueryExpr&, const QueryExpr&) = default;
};

/// Flattens nested same-operator nodes, drops duplicate siblings (first
/// occurrence wins) and collapses single-child operators.
QueryExpr canonicalize(QueryExpr q);

/// Canonical text form: uppercase AND/OR, every operator node wrapped in
/// parentheses, multi-word terms quoted, constraints in brackets.
std::string render(const QueryExpr& q);
std::string render(const Constraint& c);

/// Collects the distinct Term phrases of a tree in first-seen order.
std::vector<std::vector<std::string>> term_leaves(const QueryExpr& q);
bool has_constraints(const QueryExpr& q);
int depth(const QueryExpr& q);

nlohmann::json to_json(const QueryExpr& q);
nlohmann::json to_json(const Constraint& c);
QueryExpr query_from_json(const nlohmann::json& j);
Constraint constraint_from_json(const nlohmann::json& j);

}  // namespace hemeroteca::query
