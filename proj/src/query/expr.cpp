#include "hemeroteca/query/expr.hpp"

#include <algorithm>
#include <charconv>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::query {

using nlohmann::json;

std::string_view attribute_name(Attribute a) noexcept {
    switch (a) {
        case Attribute::WindSpeedKmh: return "wind_speed_kmh";
        case Attribute::RainMmh: return "rain_mmh";
        case Attribute::ReachKm: return "reach_km";
        case Attribute::RiverState: return "river_state";
    }
    return "wind_speed_kmh";
}

std::optional<Attribute> parse_attribute(std::string_view s) noexcept {
    for (auto a : {Attribute::WindSpeedKmh, Attribute::RainMmh, Attribute::ReachKm, Attribute::RiverState})
        if (attribute_name(a) == s) return a;
    return std::nullopt;
}

std::string_view comparator_symbol(Comparator c) noexcept {
    switch (c) {
        case Comparator::Greater: return ">";
        case Comparator::GreaterEq: return ">=";
        case Comparator::Less: return "<";
        case Comparator::LessEq: return "<=";
        case Comparator::Equal: return "=";
        case Comparator::Between: return "between";
        case Comparator::OneOf: return "in";
    }
    return "=";
}

std::optional<Comparator> parse_comparator(std::string_view s) noexcept {
    for (auto c : {Comparator::Greater, Comparator::GreaterEq, Comparator::Less, Comparator::LessEq,
                   Comparator::Equal, Comparator::Between, Comparator::OneOf})
        if (comparator_symbol(c) == s) return c;
    return std::nullopt;
}

bool Constraint::accepts(double x) const noexcept {
    switch (op) {
        case Comparator::Greater: return x > value;
        case Comparator::GreaterEq: return x >= value;
        case Comparator::Less: return x < value;
        case Comparator::LessEq: return x <= value;
        case Comparator::Equal: return x == value;
        case Comparator::Between: return x >= value && x <= upper;
        case Comparator::OneOf: return false;
    }
    return false;
}

QueryExpr QueryExpr::term(std::vector<std::string> words) {
    QueryExpr q;
    q.kind = Kind::Term;
    for (auto& w : words) {
        auto n = text::normalize_phrase(w);
        if (n.empty()) continue;
        for (auto& part : text::phrase_words(n)) q.phrase.push_back(std::move(part));
    }
    if (q.phrase.empty()) throw Error(ErrorCode::ValidationFailed, "empty term");
    return q;
}

QueryExpr QueryExpr::term(std::string_view phrase) {
    return term(std::vector<std::string>{std::string(phrase)});
}

QueryExpr QueryExpr::all_of(std::vector<QueryExpr> children) {
    QueryExpr q;
    q.kind = Kind::And;
    q.children = std::move(children);
    return q;
}

QueryExpr QueryExpr::any_of(std::vector<QueryExpr> children) {
    QueryExpr q;
    q.kind = Kind::Or;
    q.children = std::move(children);
    return q;
}

QueryExpr QueryExpr::with(query::Constraint c) {
    QueryExpr q;
    q.kind = Kind::Constraint;
    q.constraint = std::move(c);
    return q;
}

std::string QueryExpr::phrase_text() const { return text::join(phrase, " "); }

QueryExpr canonicalize(QueryExpr q) {
    if (q.kind != QueryExpr::Kind::And && q.kind != QueryExpr::Kind::Or) return q;
    std::vector<QueryExpr> flat;
    for (auto& child : q.children) {
        auto c = canonicalize(std::move(child));
        if (c.kind == q.kind) {
            for (auto& g : c.children)
                if (std::find(flat.begin(), flat.end(), g) == flat.end()) flat.push_back(std::move(g));
        } else if (std::find(flat.begin(), flat.end(), c) == flat.end()) {
            flat.push_back(std::move(c));
        }
    }
    if (flat.size() == 1) return std::move(flat.front());
    q.children = std::move(flat);
    return q;
}

namespace {

std::string number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

bool is_keyword(const std::string& w) {
    return w == "and" || w == "or" || w == "y" || w == "o";
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace

std::string render(const Constraint& c) {
    std::string out = "[" + std::string(attribute_name(c.attribute)) + " " + std::string(comparator_symbol(c.op));
    if (c.op == Comparator::Between) {
        out += " " + number(c.value) + " " + number(c.upper);
    } else if (c.op == Comparator::OneOf || (c.op == Comparator::Equal && !c.labels.empty())) {
        out += " " + text::join(c.labels, "|");
    } else {
        out += " " + number(c.value);
    }
    if (!c.unit.empty()) out += " " + c.unit;
    if (c.anchor) out += " @ " + quote(c.anchor->place) + " " + number(c.anchor->lat) + " " + number(c.anchor->lon);
    return out + "]";
}

std::string render(const QueryExpr& q) {
    switch (q.kind) {
        case QueryExpr::Kind::Term:
            if (q.phrase.size() == 1 && !is_keyword(q.phrase.front())) return q.phrase.front();
            return quote(q.phrase_text());
        case QueryExpr::Kind::Constraint:
            return render(*q.constraint);
        case QueryExpr::Kind::And:
        case QueryExpr::Kind::Or: {
            const char* op = q.kind == QueryExpr::Kind::And ? " AND " : " OR ";
            std::string out = "(";
            for (std::size_t i = 0; i < q.children.size(); ++i) {
                if (i) out += op;
                out += render(q.children[i]);
            }
            return out + ")";
        }
    }
    return {};
}

std::vector<std::vector<std::string>> term_leaves(const QueryExpr& q) {
    std::vector<std::vector<std::string>> out;
    auto walk = [&](auto&& self, const QueryExpr& e) -> void {
        if (e.is_term()) {
            if (std::find(out.begin(), out.end(), e.phrase) == out.end()) out.push_back(e.phrase);
            return;
        }
        for (const auto& c : e.children) self(self, c);
    };
    walk(walk, q);
    return out;
}

bool has_constraints(const QueryExpr& q) {
    if (q.is_constraint()) return true;
    return std::any_of(q.children.begin(), q.children.end(), [](const QueryExpr& c) { return has_constraints(c); });
}

int depth(const QueryExpr& q) {
    int d = 0;
    for (const auto& c : q.children) d = std::max(d, depth(c));
    return d + 1;
}

json to_json(const Constraint& c) {
    json j{{"attribute", attribute_name(c.attribute)}, {"op", comparator_symbol(c.op)}};
    if (c.op == Comparator::OneOf || (c.op == Comparator::Equal && !c.labels.empty())) {
        j["labels"] = c.labels;
    } else {
        j["value"] = c.value;
        if (c.op == Comparator::Between) j["upper"] = c.upper;
    }
    if (!c.unit.empty()) j["unit"] = c.unit;
    if (c.anchor) j["anchor"] = {{"place", c.anchor->place}, {"lat", c.anchor->lat}, {"lon", c.anchor->lon}};
    return j;
}

Constraint constraint_from_json(const json& j) {
    Constraint c;
    const auto attr = parse_attribute(j.at("attribute").get<std::string>());
    if (!attr) throw Error(ErrorCode::ValidationFailed, "unknown attribute: " + j.at("attribute").get<std::string>());
    const auto op = parse_comparator(j.at("op").get<std::string>());
    if (!op) throw Error(ErrorCode::ValidationFailed, "unknown comparator: " + j.at("op").get<std::string>());
    c.attribute = *attr;
    c.op = *op;
    if (auto it = j.find("labels"); it != j.end()) c.labels = it->get<std::vector<std::string>>();
    c.value = j.value("value", 0.0);
    c.upper = j.value("upper", 0.0);
    c.unit = j.value("unit", std::string{});
    if (auto it = j.find("anchor"); it != j.end())
        c.anchor = GeoAnchor{it->at("place").get<std::string>(), it->at("lat").get<double>(), it->at("lon").get<double>()};
    if ((c.op == Comparator::OneOf) && c.labels.empty())
        throw Error(ErrorCode::ValidationFailed, "'in' constraint needs labels");
    return c;
}

json to_json(const QueryExpr& q) {
    switch (q.kind) {
        case QueryExpr::Kind::Term: return {{"term", q.phrase}};
        case QueryExpr::Kind::Constraint: return {{"constraint", to_json(*q.constraint)}};
        case QueryExpr::Kind::And:
        case QueryExpr::Kind::Or: {
            json children = json::array();
            for (const auto& c : q.children) children.push_back(to_json(c));
            return {{"op", q.kind == QueryExpr::Kind::And ? "and" : "or"}, {"children", children}};
        }
    }
    return {};
}

QueryExpr query_from_json(const json& j) {
    if (j.contains("term")) return QueryExpr::term(j.at("term").get<std::vector<std::string>>());
    if (j.contains("constraint")) return QueryExpr::with(constraint_from_json(j.at("constraint")));
    const auto op = j.at("op").get<std::string>();
    std::vector<QueryExpr> children;
    for (const auto& c : j.at("children")) children.push_back(query_from_json(c));
    if (children.size() < 2) throw Error(ErrorCode::ValidationFailed, "operator needs at least two children");
    if (op == "and") return QueryExpr::all_of(std::move(children));
    if (op == "or") return QueryExpr::any_of(std::move(children));
    throw Error(ErrorCode::ValidationFailed, "unknown operator: " + op);
}

}  // namespace hemeroteca::query
