#include "hemeroteca/query/rewrite.hpp"

#include <algorithm>
#include <charconv>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/geo/gazetteer.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/vocab/vocabulary.hpp"

namespace hemeroteca::query {

namespace {

template <typename Fn>
QueryExpr map_terms(const QueryExpr& q, Fn&& fn) {
    if (q.is_term()) return fn(q);
    if (q.is_constraint()) return q;
    QueryExpr out = q;
    out.children.clear();
    for (const auto& c : q.children) out.children.push_back(map_terms(c, fn));
    return out;
}

void push_unique(std::vector<QueryExpr>& into, QueryExpr e) {
    if (std::find(into.begin(), into.end(), e) == into.end()) into.push_back(std::move(e));
}

QueryExpr phrase_term(const std::string& phrase) {
    QueryExpr t;
    t.kind = QueryExpr::Kind::Term;
    t.phrase = text::phrase_words(phrase);
    return t;
}

// Variants of a multi-word phrase with one word replaced by each of its
// alternatives.
template <typename Alternatives>
std::vector<QueryExpr> word_substitutions(const QueryExpr& t, Alternatives&& alternatives) {
    std::vector<QueryExpr> out;
    if (t.phrase.size() < 2) return out;
    for (std::size_t i = 0; i < t.phrase.size(); ++i) {
        for (const auto& alt : alternatives(t.phrase[i])) {
            QueryExpr v;
            v.kind = QueryExpr::Kind::Term;
            for (std::size_t j = 0; j < t.phrase.size(); ++j) {
                if (j != i) {
                    v.phrase.push_back(t.phrase[j]);
                    continue;
                }
                for (auto& w : text::phrase_words(alt)) v.phrase.push_back(std::move(w));
            }
            if (v != t) push_unique(out, std::move(v));
        }
    }
    return out;
}

QueryExpr extend_term(const QueryExpr& t, const vocab::Vocabulary& vocab, const ExtendOptions& opt) {
    const auto exp = vocab.expand_term(t.phrase_text(), {true, true, opt.hyponyms}, opt.depth);
    std::vector<QueryExpr> equivalents;
    for (const auto& s : exp.synonyms) push_unique(equivalents, phrase_term(s));
    for (const auto& s : exp.hyponyms) push_unique(equivalents, phrase_term(s));
    for (auto& v : word_substitutions(t, [&](const std::string& w) {
             return vocab.expand_term(w, {true, false, false}, opt.depth).synonyms;
         }))
        push_unique(equivalents, std::move(v));
    std::vector<QueryExpr> general;
    for (const auto& h : exp.hypernyms) push_unique(general, phrase_term(h));
    std::erase(equivalents, t);
    std::erase(general, t);

    if (equivalents.empty() && general.empty()) return t;
    if (opt.mode == HypernymMode::Disjunctive) {
        std::vector<QueryExpr> alts{t};
        for (auto& e : equivalents) push_unique(alts, std::move(e));
        for (auto& g : general) push_unique(alts, std::move(g));
        return QueryExpr::any_of(std::move(alts));
    }
    QueryExpr base = t;
    if (!equivalents.empty()) {
        std::vector<QueryExpr> alts{t};
        for (auto& e : equivalents) push_unique(alts, std::move(e));
        base = QueryExpr::any_of(std::move(alts));
    }
    if (general.empty()) return base;
    QueryExpr broader = general.size() == 1 ? general.front() : QueryExpr::any_of(std::move(general));
    return QueryExpr::all_of({std::move(base), std::move(broader)});
}

}  // namespace

QueryExpr extend_with_thesaurus(const QueryExpr& q, const vocab::Vocabulary& vocab, const ExtendOptions& options) {
    return canonicalize(map_terms(q, [&](const QueryExpr& t) { return extend_term(t, vocab, options); }));
}

QueryExpr localize_query(const QueryExpr& q, const vocab::Vocabulary& vocab, const std::string& country) {
    const auto supported = vocab.supported_countries();
    if (!supported.contains(country)) {
        std::vector<std::string> list(supported.begin(), supported.end());
        throw Error(ErrorCode::ValidationFailed,
                    "unsupported country '" + country + "'; supported: " + text::join(list, ", "), list);
    }
    return canonicalize(map_terms(q, [&](const QueryExpr& t) {
        std::vector<QueryExpr> alts{t};
        for (const auto& e : vocab.cultural_equivalents(t.phrase_text(), country)) push_unique(alts, phrase_term(e));
        for (auto& v : word_substitutions(t, [&](const std::string& w) { return vocab.cultural_equivalents(w, country); }))
            push_unique(alts, std::move(v));
        return alts.size() == 1 ? t : QueryExpr::any_of(std::move(alts));
    }));
}

GeoContext parse_geo_context(std::string_view text, const geo::Gazetteer& gazetteer) {
    const auto comma = text.rfind(',');
    if (comma == std::string_view::npos)
        throw Error(ErrorCode::ValidationFailed, "geo context must be \"<place>,<radius_km>\"");
    const auto place = text::trim(text.substr(0, comma));
    auto radius_text = text::trim(text.substr(comma + 1));
    if (radius_text.ends_with("km")) radius_text = text::trim(radius_text.substr(0, radius_text.size() - 2));
    double radius = 0;
    auto [p, ec] = std::from_chars(radius_text.data(), radius_text.data() + radius_text.size(), radius);
    if (ec != std::errc{} || p != radius_text.data() + radius_text.size() || radius <= 0)
        throw Error(ErrorCode::ValidationFailed, "geo context radius must be a positive number of km");
    const auto candidates = gazetteer.resolve(place);
    if (candidates.empty()) throw not_found("place '" + place + "'");
    const auto& top = candidates.front();
    return {top.display_name, top.lat, top.lon, radius};
}

std::vector<QueryExpr> rule_expand(const QueryExpr& q, std::span<const DomainRule> rules,
                                   const std::optional<GeoContext>& geo) {
    std::vector<QueryExpr> variants{q};
    for (const auto& phrase : term_leaves(q)) {
        QueryExpr term;
        term.kind = QueryExpr::Kind::Term;
        term.phrase = phrase;
        auto replace_with = [&](const QueryExpr& replacement) {
            return canonicalize(map_terms(q, [&](const QueryExpr& t) { return t == term ? replacement : t; }));
        };
        for (const auto& rule : rules) {
            if (!phrase_matches_trigger(phrase, rule.trigger)) continue;
            for (const auto& imp : rule.implications) {
                if (imp.constraint.attribute != Attribute::ReachKm) {
                    push_unique(variants, replace_with(QueryExpr::any_of({term, QueryExpr::with(imp.constraint)})));
                    continue;
                }
                if (!geo) continue;
                const GeoAnchor anchor{geo->place, geo->lat, geo->lon};
                Constraint reach = imp.constraint;
                reach.anchor = anchor;
                std::vector<QueryExpr> parts{term};
                if (imp.when) parts.push_back(QueryExpr::with(*imp.when));
                parts.push_back(QueryExpr::with(reach));
                push_unique(variants, replace_with(QueryExpr::all_of(std::move(parts))));

                Constraint around{Attribute::ReachKm, Comparator::LessEq, geo->radius_km, 0.0, {}, "km", anchor};
                push_unique(variants, replace_with(QueryExpr::all_of({term, QueryExpr::with(around)})));
            }
        }
    }
    return variants;
}

RewritePlan plan_rewrites(const QueryExpr& q, const vocab::Vocabulary& vocab, std::span<const DomainRule> rules,
                          const RewriteOptions& options) {
    RewritePlan plan{q, q, {}, {}};
    if (options.extend) plan.extended = extend_with_thesaurus(q, vocab, options.extend_options);
    std::vector<std::string> countries;
    for (const auto& c : options.localize) {
        if (c == "*") {
            for (const auto& s : vocab.supported_countries()) countries.push_back(s);
        } else {
            countries.push_back(c);
        }
    }
    for (const auto& c : countries) plan.localized.insert_or_assign(c, localize_query(plan.extended, vocab, c));
    if (options.rules) plan.rule_variants = rule_expand(q, rules, options.geo);
    return plan;
}

nlohmann::json to_json(const RewritePlan& plan) {
    auto entry = [](const QueryExpr& e) { return nlohmann::json{{"text", render(e)}, {"tree", to_json(e)}}; };
    nlohmann::json localized = nlohmann::json::object();
    for (const auto& [c, e] : plan.localized) localized[c] = entry(e);
    nlohmann::json variants = nlohmann::json::array();
    for (const auto& v : plan.rule_variants) variants.push_back(entry(v));
    return {{"original", entry(plan.original)},
            {"extended", entry(plan.extended)},
            {"localized", localized},
            {"rule_variants", variants}};
}

}  // namespace hemeroteca::query
