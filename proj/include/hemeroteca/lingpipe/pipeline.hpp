#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hemeroteca/corpus/article.hpp"
#include "hemeroteca/geo/gazetteer.hpp"
#include "hemeroteca/lingpipe/tagger.hpp"

namespace hemeroteca::vocab {
class Vocabulary;
}

namespace hemeroteca::lingpipe {

enum class EntityKind { GPE, PERSON, ORG, DATE };
std::string_view entity_name(EntityKind k) noexcept;
PosTag entity_tag(EntityKind k) noexcept;

/// Token range [begin, end) inside one sentence.
struct Span {
    std::uint32_t sentence = 0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;

    bool overlaps(const Span& o) const noexcept { return sentence == o.sentence && begin < o.end && o.begin < end; }
    std::string key() const;
    static Span parse(std::string_view key);
    friend auto operator<=>(const Span&, const Span&) = default;
};

struct EntitySpan {
    EntityKind kind = EntityKind::GPE;
    Span span;
    std::string text;       // surfaces joined by single spaces
    std::string canonical;  // gazetteer display name, list entry or ISO date

    friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

/// Known person and organization names, compared case- and accent-free.
class NameList {
public:
    static NameList load(const std::string& path);
    static NameList parse(std::istream& in);
    void add(std::string_view name);
    /// Display form of a matching entry.
    std::optional<std::string> match(std::string_view phrase) const;
    std::size_t size() const { return names_.size(); }
    std::size_t longest_name_words() const { return longest_; }

private:
    std::map<std::string, std::string> names_;  // shadow key -> display form
    std::size_t longest_ = 1;
};

struct EntityResources {
    const geo::Gazetteer* gazetteer = nullptr;
    const NameList* persons = nullptr;
    const NameList* organizations = nullptr;
};

/// Entities of one tagged sentence, left to right, longest match first,
/// never overlapping. Name windows start at proper-noun-like tokens
/// (NNP, or any capitalized content word) and may bridge the lowercase
/// connectors de/del/la/las/los/y; they are tried against the gazetteer
/// (GPE), then organizations (ORG), then persons (PERSON). Dates: "12 de
/// enero de 1805", "enero de 1805", "12 de enero", "siglo XIX" and bare
/// years 1500-1950.
std::vector<EntitySpan> detect_entities(const std::vector<TaggedToken>& sentence, const EntityResources& resources);

struct Leaf {
    std::string term;        // surface form
    std::string normalized;
    PosTag pos = PosTag::NN;  // word-level tag
    std::uint32_t position = 0;
    bool punct = false;

    friend bool operator==(const Leaf&, const Leaf&) = default;
};

/// A tree vertex carrying a tag. A node holds child nodes or leaves, never
/// both; the root holds nodes, every other node holds leaves.
struct Node {
    PosTag tag = PosTag::OTHER;
    std::string canonical;  // entity nodes only, never empty there
    std::vector<Node> children;
    std::vector<Leaf> leaves;

    friend bool operator==(const Node&, const Node&) = default;
};

struct SentenceTree {
    Node root;
    std::string text;

    friend bool operator==(const SentenceTree&, const SentenceTree&) = default;
};

struct ContentTree {
    std::string article_id;
    std::vector<SentenceTree> sentences;
    std::vector<EntitySpan> entities;

    /// Leaves of every sentence in order.
    std::vector<const Leaf*> leaves() const;
    friend bool operator==(const ContentTree&, const ContentTree&) = default;
};

nlohmann::json to_json(const ContentTree& tree);

enum class CandidateStatus { Pending, Confirmed, Rejected };
std::string_view status_name(CandidateStatus s) noexcept;

struct TermHit {
    std::string term;          // normalized phrase as written in the article
    std::string concept_term;  // vocabulary member it matched
    Span span;

    friend bool operator==(const TermHit&, const TermHit&) = default;
};

/// Trigger terms bundled with the places, dates and people of the same
/// article: the unit an analyst validates.
struct EventCandidate {
    std::string article_id;
    std::vector<TermHit> triggers;
    std::vector<EntitySpan> locations;
    std::vector<EntitySpan> dates;
    std::vector<EntitySpan> persons;
    std::vector<TermHit> damage_hints;
    CandidateStatus status = CandidateStatus::Pending;

    friend bool operator==(const EventCandidate&, const EventCandidate&) = default;
};

nlohmann::json to_json(const EventCandidate& c);
EventCandidate candidate_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EntitySpan& e);
EntitySpan entity_from_json(const nlohmann::json& j);

/// Immutable resources shared by all pipeline runs.
struct PipelineResources {
    const TagLexicon* lexicon = nullptr;
    EntityResources entities;
    const vocab::Vocabulary* vocabulary = nullptr;
    std::vector<std::string> damage_terms;  // normalized phrases
};

/// Loads a damages list: one phrase per line.
std::vector<std::string> load_phrase_list(const std::string& path);

/// Segment, tokenize, tag and detect entities. Throws
/// Error(ValidationFailed, "nothing to parse") for blank text.
ContentTree build_content_tree(const corpus::Article& article, const PipelineResources& resources);

/// At most one candidate per article; none when no leaf is meteorological.
std::vector<EventCandidate> extract_event_candidates(const ContentTree& tree, const PipelineResources& resources);

struct PipelineResult {
    ContentTree tree;
    std::vector<EventCandidate> candidates;

    friend bool operator==(const PipelineResult&, const PipelineResult&) = default;
};

/// Runs the pipeline over every article in parallel (OpenMP); results are in
/// input order.
std::vector<PipelineResult> run_pipeline(std::span<const corpus::Article> articles, const PipelineResources& resources);
std::vector<PipelineResult> run_pipeline_serial(std::span<const corpus::Article> articles,
                                                const PipelineResources& resources);

}  // namespace hemeroteca::lingpipe
