#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hemeroteca/query/expr.hpp"
#include "hemeroteca/query/rules.hpp"

namespace hemeroteca::geo {
class Gazetteer;
}
namespace hemeroteca::vocab {
class Vocabulary;
}

namespace hemeroteca::query {

/// How more general terms are attached to an extended term.
///  Disjunctive: Or(term, synonyms..., hyponyms..., hypernyms...) - results
///               can only grow.
///  Conjunctive: And(Or(term, synonyms..., hyponyms...), Or(hypernyms...)) -
///               the literal construction, which narrows results.
enum class HypernymMode { Disjunctive, Conjunctive };

struct ExtendOptions {
    HypernymMode mode = HypernymMode::Disjunctive;
    int depth = 1;
    bool hyponyms = true;
};

QueryExpr extend_with_thesaurus(const QueryExpr& q, const vocab::Vocabulary& vocab, const ExtendOptions& options = {});

/// Replaces each term having cultural equivalents in `country` by
/// Or(term, equivalents...). Throws Error(ValidationFailed) listing the
/// supported countries when `country` has no folksonomy.
QueryExpr localize_query(const QueryExpr& q, const vocab::Vocabulary& vocab, const std::string& country);

struct GeoContext {
    std::string place;
    double lat = 0.0;
    double lon = 0.0;
    double radius_km = 0.0;
};

/// Parses "<place>,<radius_km>" and resolves the place (top-ranked
/// gazetteer candidate). Throws Error(ValidationFailed/NotFound).
GeoContext parse_geo_context(std::string_view text, const geo::Gazetteer& gazetteer);

/// Query variants proposed by domain rules. The original query is always
/// first and no variant appears twice. For a term matching a rule trigger
/// each attribute implication yields Or(term, constraint); reach
/// implications need a geo context and yield And(term, reach constraints)
/// around the context point (rule reach and context radius).
std::vector<QueryExpr> rule_expand(const QueryExpr& q, std::span<const DomainRule> rules,
                                   const std::optional<GeoContext>& geo = std::nullopt);

struct RewritePlan {
    QueryExpr original;
    QueryExpr extended;
    std::map<std::string, QueryExpr> localized;
    std::vector<QueryExpr> rule_variants;
};

struct RewriteOptions {
    bool extend = false;
    ExtendOptions extend_options;
    /// Countries to localize into; "*" expands to every supported country.
    std::vector<std::string> localize;
    bool rules = false;
    std::optional<GeoContext> geo;
};

/// Localization starts from the extended query when extension is on.
RewritePlan plan_rewrites(const QueryExpr& q, const vocab::Vocabulary& vocab, std::span<const DomainRule> rules,
                          const RewriteOptions& options);

nlohmann::json to_json(const RewritePlan& plan);

}  // namespace hemeroteca::query
