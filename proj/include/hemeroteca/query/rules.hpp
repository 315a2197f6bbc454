#pragma once

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hemeroteca/query/expr.hpp"

namespace hemeroteca::vocab {
class Vocabulary;
}

namespace hemeroteca::query {

/// One consequence of a domain rule, optionally guarded by a condition on
/// another attribute (the reach rule only applies to storms of a given wind
/// speed).
struct Implication {
    Constraint constraint;
    std::optional<Constraint> when;
    std::string note;

    friend bool operator==(const Implication&, const Implication&) = default;
};

/// Meteorologist-provided knowledge: the presence of `trigger` implies
/// attribute values for the reported event.
struct DomainRule {
    std::string id;
    std::string trigger;  // normalized phrase
    std::vector<Implication> implications;
    std::string note;

    friend bool operator==(const DomainRule&, const DomainRule&) = default;
};

/// One JSON record per line: {"id", "trigger", "implications": [...], "note"?}.
std::vector<DomainRule> parse_rules(std::istream& in);
std::vector<DomainRule> load_rules(const std::string& path);
nlohmann::json to_json(const DomainRule& rule);

/// Throws Error(ValidationFailed) when a trigger is outside the
/// meteorological vocabulary.
void validate_rules(const std::vector<DomainRule>& rules, const vocab::Vocabulary& vocab);

/// Singular, accent-free comparison key for a word ("tormentas" -> "tormenta",
/// "inundaciones" -> "inundacion").
std::string singular_key(std::string_view word);

/// True when every word of the trigger occurs in the phrase, compared via
/// singular_key and independent of word order ("fuertes tormentas" matches
/// the trigger "tormenta fuerte").
bool phrase_matches_trigger(const std::vector<std::string>& phrase, std::string_view trigger);

}  // namespace hemeroteca::query
