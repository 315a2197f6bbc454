#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace hemeroteca::vocab {

inline constexpr std::string_view kPanRegional = "*";

enum class Register { Colloquial, Scientific };
enum class Origin { Seed, Analyst };
enum class RelationKind { Synonym, Hypernym, CulturalEquivalent, ScientificEquivalent };

std::string_view register_name(Register r) noexcept;
Register parse_register(std::string_view s);
std::string_view origin_name(Origin o) noexcept;
std::string_view relation_name(RelationKind k) noexcept;
RelationKind parse_relation(std::string_view s);

struct VocabEntry {
    std::string term;     // normalized phrase
    std::string country;  // ISO code or "*"
    Register register_ = Register::Colloquial;
    Origin added_by = Origin::Seed;

    friend bool operator==(const VocabEntry&, const VocabEntry&) = default;
};

/// Directed edge. Synonyms are stored once and read in both directions;
/// cultural equivalents run from a country's colloquial term to the
/// pan-regional term it stands for, scoped by `country`.
struct TermRelation {
    std::string from;
    std::string to;
    RelationKind kind = RelationKind::Synonym;
    std::string country;  // empty unless kind == CulturalEquivalent

    friend bool operator==(const TermRelation&, const TermRelation&) = default;
};

nlohmann::json to_json(const VocabEntry& e);
nlohmann::json to_json(const TermRelation& r);

struct Expansion {
    std::set<std::string> synonyms;
    std::set<std::string> hypernyms;
    std::set<std::string> hyponyms;

    bool empty() const { return synonyms.empty() && hypernyms.empty() && hyponyms.empty(); }
};

struct ExpandKinds {
    bool synonyms = true;
    bool hypernyms = true;
    bool hyponyms = true;
};

/// Folksonomies plus the thesaurus. Reads run concurrently; add/link are
/// serialized. When a journal file is attached, analyst mutations are
/// appended to it and replayed on the next load.
class Vocabulary {
public:
    Vocabulary() = default;
    Vocabulary(const Vocabulary&) = delete;
    Vocabulary& operator=(const Vocabulary&) = delete;

    /// Loads `thesaurus.tsv` and `folksonomy/<CC>.tsv` from a resource dir.
    void load_resources(const std::filesystem::path& dir);
    /// `term<TAB>relation<TAB>term[<TAB>country]` lines.
    void load_thesaurus(std::istream& in);
    /// `term<TAB>register[<TAB>equivalent]` lines for one country.
    void load_folksonomy(const std::string& country, std::istream& in);
    /// Attaches (and replays) an append-only journal of analyst edits.
    void attach_journal(const std::filesystem::path& file);

    /// Duplicate (term, country) is a no-op returning the existing entry.
    VocabEntry add_term(std::string_view term, const std::string& country, Register reg,
                        Origin origin = Origin::Analyst);

    /// Duplicate relations are no-ops. A hypernym edge that would close a
    /// cycle is rejected with Error(Conflict, "cycle").
    TermRelation link_terms(std::string_view from, std::string_view to, RelationKind kind,
                            const std::optional<std::string>& country = std::nullopt,
                            Origin origin = Origin::Analyst);

    /// One hop per requested kind by default; the term itself is excluded.
    Expansion expand_term(std::string_view term, ExpandKinds kinds = {}, int depth = 1) const;

    /// Terms scoped to `country` that stand for the same pan-regional term.
    std::set<std::string> cultural_equivalents(std::string_view term, const std::string& country) const;

    /// Countries that have at least one folksonomy entry.
    std::set<std::string> supported_countries() const;

    /// Meteorological vocabulary: every entry term and thesaurus term.
    bool is_meteorological(std::string_view normalized_term) const;
    std::set<std::string> meteorological_terms() const;

    std::vector<VocabEntry> entries() const;
    std::vector<TermRelation> relations() const;
    std::optional<VocabEntry> entry(std::string_view term, const std::string& country) const;

private:
    using RelKey = std::tuple<std::string, std::string, RelationKind, std::string>;

    VocabEntry add_term_locked(const std::string& term, const std::string& country, Register reg, Origin origin);
    TermRelation link_locked(const std::string& from, const std::string& to, RelationKind kind,
                             const std::string& country, Origin origin);
    bool reaches_by_hypernym(const std::string& from, const std::string& target) const;
    void ensure_pan_regional(const std::string& term);
    void journal(const nlohmann::json& record) const;

    mutable std::shared_mutex mutex_;
    std::map<std::pair<std::string, std::string>, VocabEntry> entries_;
    std::vector<TermRelation> relations_;
    std::set<RelKey> relation_keys_;
    std::set<std::string> shadow_terms_;
    std::optional<std::filesystem::path> journal_;
};

}  // namespace hemeroteca::vocab
