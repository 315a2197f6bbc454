#include "hemeroteca/lingpipe/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <exception>
#include <fstream>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/common/partial_date.hpp"
#include "hemeroteca/query/rules.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/vocab/vocabulary.hpp"

namespace hemeroteca::lingpipe {

using nlohmann::json;

std::string_view entity_name(EntityKind k) noexcept {
    switch (k) {
        case EntityKind::GPE: return "GPE";
        case EntityKind::PERSON: return "PERSON";
        case EntityKind::ORG: return "ORG";
        case EntityKind::DATE: return "DATE";
    }
    return "GPE";
}

PosTag entity_tag(EntityKind k) noexcept {
    switch (k) {
        case EntityKind::GPE: return PosTag::GPE;
        case EntityKind::PERSON: return PosTag::PERSON;
        case EntityKind::ORG: return PosTag::ORG;
        case EntityKind::DATE: return PosTag::DATE;
    }
    return PosTag::GPE;
}

std::string_view status_name(CandidateStatus s) noexcept {
    switch (s) {
        case CandidateStatus::Pending: return "pending";
        case CandidateStatus::Confirmed: return "confirmed";
        case CandidateStatus::Rejected: return "rejected";
    }
    return "pending";
}

std::string Span::key() const {
    return std::to_string(sentence) + ":" + std::to_string(begin) + "-" + std::to_string(end);
}

Span Span::parse(std::string_view key) {
    Span s;
    const auto colon = key.find(':');
    const auto dash = key.find('-', colon == std::string_view::npos ? 0 : colon);
    auto num = [&](std::string_view part, std::uint32_t& out) {
        auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
        return ec == std::errc{} && p == part.data() + part.size() && !part.empty();
    };
    if (colon == std::string_view::npos || dash == std::string_view::npos || !num(key.substr(0, colon), s.sentence) ||
        !num(key.substr(colon + 1, dash - colon - 1), s.begin) || !num(key.substr(dash + 1), s.end) || s.end <= s.begin)
        throw Error(ErrorCode::ValidationFailed, "malformed span '" + std::string(key) + "' (expected s:b-e)");
    return s;
}

NameList NameList::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw not_found("name list " + path);
    return parse(in);
}

NameList NameList::parse(std::istream& in) {
    NameList list;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = text::trim(line);
        if (!t.empty() && t[0] != '#') list.add(t);
    }
    return list;
}

void NameList::add(std::string_view name) {
    const auto words = text::phrase_words(name);
    if (words.empty()) return;
    names_.try_emplace(text::strip_accents(text::join(words, " ")), text::trim(name));
    longest_ = std::max(longest_, words.size());
}

std::optional<std::string> NameList::match(std::string_view phrase) const {
    auto it = names_.find(text::strip_accents(text::normalize_phrase(phrase)));
    if (it == names_.end()) return std::nullopt;
    return it->second;
}

namespace {

bool is_connector(const TaggedToken& t) {
    static const std::set<std::string, std::less<>> connectors{"de", "del", "la", "las", "los", "y", "el"};
    return !t.token.punct && !text::is_capitalized(t.token.surface) && connectors.contains(t.token.normalized);
}

bool proper_like(const TaggedToken& t) {
    if (t.token.punct || !text::is_capitalized(t.token.surface)) return false;
    return t.tag == PosTag::NNP || t.tag == PosTag::NN || t.tag == PosTag::NNS || t.tag == PosTag::JJ;
}

std::string surface_text(const std::vector<TaggedToken>& s, std::size_t b, std::size_t e) {
    std::string out;
    for (std::size_t i = b; i < e; ++i) {
        if (!out.empty()) out += ' ';
        out += s[i].token.surface;
    }
    return out;
}

std::optional<int> small_number(const TaggedToken& t, int lo, int hi) {
    if (t.token.punct || !text::is_numeral(t.token.surface)) return std::nullopt;
    int v = 0;
    const auto& s = t.token.surface;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v < lo || v > hi) return std::nullopt;
    return v;
}

std::string two_digits(int v) { return (v < 10 ? "0" : "") + std::to_string(v); }

struct Match {
    std::size_t length = 0;
    EntityKind kind = EntityKind::DATE;
    std::string canonical;
};

Match match_date(const std::vector<TaggedToken>& s, std::size_t i) {
    auto word = [&](std::size_t k) -> const std::string* {
        return k < s.size() && !s[k].token.punct ? &s[k].token.normalized : nullptr;
    };
    auto is_de = [&](std::size_t k) { return word(k) && *word(k) == "de"; };
    auto month_at = [&](std::size_t k) -> std::optional<int> { return word(k) ? spanish_month(*word(k)) : std::nullopt; };
    auto year_at = [&](std::size_t k) -> std::optional<int> {
        return k < s.size() ? small_number(s[k], 1000, 2100) : std::nullopt;
    };

    if (auto day = small_number(s[i], 1, 31)) {
        if (is_de(i + 1)) {
            if (auto m = month_at(i + 2)) {
                if (is_de(i + 3)) {
                    if (auto y = year_at(i + 4)) {
                        try {
                            return {5, EntityKind::DATE, PartialDate(*y, *m, *day).to_string()};
                        } catch (const Error&) {
                        }
                    }
                }
                return {3, EntityKind::DATE, "--" + two_digits(*m) + "-" + two_digits(*day)};
            }
        }
    }
    if (auto m = month_at(i)) {
        if (is_de(i + 1))
            if (auto y = year_at(i + 2)) return {3, EntityKind::DATE, PartialDate(*y, *m).to_string()};
    }
    if (word(i) && *word(i) == "siglo" && i + 1 < s.size()) {
        if (auto r = century_range(s[i + 1].token.surface)) return {2, EntityKind::DATE, r->to_string()};
    }
    if (!s[i].token.punct) {
        if (auto r = century_range(s[i].token.surface); r && word(i + 1) && *word(i + 1) == "c")
            return {2, EntityKind::DATE, r->to_string()};
    }
    if (auto y = small_number(s[i], 1500, 1950); y && s[i].token.surface.size() == 4)
        return {1, EntityKind::DATE, std::to_string(*y)};
    return {};
}

Match match_name(const std::vector<TaggedToken>& s, std::size_t i, const EntityResources& res) {
    if (!proper_like(s[i])) return {};
    std::size_t max_words = 1;
    if (res.gazetteer) max_words = std::max(max_words, res.gazetteer->longest_name_words());
    if (res.persons) max_words = std::max(max_words, res.persons->longest_name_words());
    if (res.organizations) max_words = std::max(max_words, res.organizations->longest_name_words());
    std::size_t limit = i + 1;
    while (limit < s.size() && limit - i < max_words && (proper_like(s[limit]) || is_connector(s[limit]))) ++limit;
    for (std::size_t e = limit; e > i; --e) {
        if (!proper_like(s[e - 1])) continue;
        const auto phrase = surface_text(s, i, e);
        const auto normalized = text::normalize_phrase(phrase);
        if (res.gazetteer && res.gazetteer->contains(normalized)) {
            const auto candidates = res.gazetteer->resolve(normalized);
            return {e - i, EntityKind::GPE, candidates.front().display_name};
        }
        if (res.organizations)
            if (auto m = res.organizations->match(phrase)) return {e - i, EntityKind::ORG, *m};
        if (res.persons)
            if (auto m = res.persons->match(phrase)) return {e - i, EntityKind::PERSON, *m};
    }
    return {};
}

}  // namespace

std::vector<EntitySpan> detect_entities(const std::vector<TaggedToken>& sentence, const EntityResources& resources) {
    std::vector<EntitySpan> out;
    std::size_t i = 0;
    while (i < sentence.size()) {
        Match best = match_date(sentence, i);
        if (Match name = match_name(sentence, i, resources); name.length > best.length) best = std::move(name);
        if (best.length == 0) {
            ++i;
            continue;
        }
        EntitySpan e;
        e.kind = best.kind;
        e.span = {sentence[i].token.sentence_index, sentence[i].token.position,
                  sentence[i + best.length - 1].token.position + 1};
        e.text = surface_text(sentence, i, i + best.length);
        e.canonical = std::move(best.canonical);
        out.push_back(std::move(e));
        i += best.length;
    }
    return out;
}

std::vector<const Leaf*> ContentTree::leaves() const {
    std::vector<const Leaf*> out;
    for (const auto& s : sentences)
        for (const auto& n : s.root.children)
            for (const auto& l : n.leaves) out.push_back(&l);
    return out;
}

json to_json(const EntitySpan& e) {
    return {{"kind", entity_name(e.kind)}, {"span", e.span.key()}, {"text", e.text}, {"canonical", e.canonical}};
}

EntitySpan entity_from_json(const json& j) {
    EntitySpan e;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "GPE") e.kind = EntityKind::GPE;
    else if (kind == "PERSON") e.kind = EntityKind::PERSON;
    else if (kind == "ORG") e.kind = EntityKind::ORG;
    else if (kind == "DATE") e.kind = EntityKind::DATE;
    else throw Error(ErrorCode::ValidationFailed, "unknown entity kind: " + kind);
    e.span = Span::parse(j.at("span").get<std::string>());
    e.text = j.at("text").get<std::string>();
    e.canonical = j.value("canonical", std::string{});
    return e;
}

namespace {

json to_json(const Node& n) {
    json children = json::array();
    for (const auto& c : n.children) children.push_back(to_json(c));
    for (const auto& l : n.leaves)
        children.push_back({{"term", l.term}, {"normalized", l.normalized}, {"pos", tag_name(l.pos)}, {"position", l.position}});
    json j{{"tag", tag_name(n.tag)}, {"children", children}};
    if (!n.canonical.empty()) j["canonical"] = n.canonical;
    return j;
}

json to_json(const TermHit& h) { return {{"term", h.term}, {"concept", h.concept_term}, {"span", h.span.key()}}; }

TermHit hit_from_json(const json& j) {
    return {j.at("term").get<std::string>(), j.value("concept", j.at("term").get<std::string>()),
            Span::parse(j.at("span").get<std::string>())};
}

}  // namespace

json to_json(const ContentTree& tree) {
    json sentences = json::array();
    for (const auto& s : tree.sentences) sentences.push_back({{"text", s.text}, {"root", to_json(s.root)}});
    json entities = json::array();
    for (const auto& e : tree.entities) entities.push_back(to_json(e));
    return {{"article_id", tree.article_id}, {"sentences", sentences}, {"entities", entities}};
}

json to_json(const EventCandidate& c) {
    auto list = [](const auto& items) {
        json a = json::array();
        for (const auto& x : items) a.push_back(to_json(x));
        return a;
    };
    return {{"article_id", c.article_id},      {"status", status_name(c.status)}, {"triggers", list(c.triggers)},
            {"locations", list(c.locations)}, {"dates", list(c.dates)},          {"persons", list(c.persons)},
            {"damage_hints", list(c.damage_hints)}};
}

EventCandidate candidate_from_json(const json& j) {
    EventCandidate c;
    c.article_id = j.at("article_id").get<std::string>();
    const auto status = j.value("status", std::string("pending"));
    if (status == "pending") c.status = CandidateStatus::Pending;
    else if (status == "confirmed") c.status = CandidateStatus::Confirmed;
    else if (status == "rejected") c.status = CandidateStatus::Rejected;
    else throw Error(ErrorCode::ValidationFailed, "unknown candidate status: " + status);
    for (const auto& t : j.at("triggers")) c.triggers.push_back(hit_from_json(t));
    for (const auto& e : j.value("locations", json::array())) c.locations.push_back(entity_from_json(e));
    for (const auto& e : j.value("dates", json::array())) c.dates.push_back(entity_from_json(e));
    for (const auto& e : j.value("persons", json::array())) c.persons.push_back(entity_from_json(e));
    for (const auto& d : j.value("damage_hints", json::array())) c.damage_hints.push_back(hit_from_json(d));
    if (c.triggers.empty()) throw Error(ErrorCode::ValidationFailed, "candidate without trigger terms");
    return c;
}

std::vector<std::string> load_phrase_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw not_found("phrase list " + path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = text::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto n = text::normalize_phrase(t);
        if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(std::move(n));
    }
    return out;
}

ContentTree build_content_tree(const corpus::Article& article, const PipelineResources& res) {
    if (text::trim(article.raw_text).empty()) throw Error(ErrorCode::ValidationFailed, "nothing to parse");
    if (!res.lexicon) throw Error(ErrorCode::Internal, "pipeline has no tag lexicon");
    ContentTree tree;
    tree.article_id = article.id;
    std::uint32_t index = 0;
    for (const auto& sentence : segment_sentences(article.raw_text)) {
        const auto tokens = tokenize(sentence, index);
        if (tokens.empty()) continue;
        const auto tagged = pos_tag(tokens, *res.lexicon);
        const auto entities = detect_entities(tagged, res.entities);
        SentenceTree st;
        st.text = sentence;
        st.root.tag = PosTag::OTHER;
        auto leaf_of = [](const TaggedToken& t) {
            return Leaf{t.token.surface, t.token.normalized, t.tag, t.token.position, t.token.punct};
        };
        std::size_t next_entity = 0;
        for (std::size_t i = 0; i < tagged.size();) {
            if (next_entity < entities.size() && entities[next_entity].span.begin == tagged[i].token.position) {
                const auto& e = entities[next_entity++];
                Node group{entity_tag(e.kind), e.canonical, {}, {}};
                for (; i < tagged.size() && tagged[i].token.position < e.span.end; ++i) group.leaves.push_back(leaf_of(tagged[i]));
                st.root.children.push_back(std::move(group));
                continue;
            }
            st.root.children.push_back(Node{tagged[i].tag, {}, {}, {leaf_of(tagged[i])}});
            ++i;
        }
        tree.entities.insert(tree.entities.end(), entities.begin(), entities.end());
        tree.sentences.push_back(std::move(st));
        ++index;
    }
    if (tree.sentences.empty()) throw Error(ErrorCode::ValidationFailed, "nothing to parse");
    return tree;
}

namespace {

// Leaves of one sentence in position order, with the entity kind covering
// each (if any).
struct SentenceView {
    std::vector<const Leaf*> leaves;
    std::vector<PosTag> cover;
};

std::vector<SentenceView> sentence_views(const ContentTree& tree) {
    std::vector<SentenceView> out;
    for (const auto& s : tree.sentences) {
        SentenceView v;
        for (const auto& n : s.root.children) {
            for (const auto& l : n.leaves) {
                v.leaves.push_back(&l);
                v.cover.push_back(n.canonical.empty() ? PosTag::OTHER : n.tag);
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::string singular_phrase(const std::vector<std::string>& words) {
    std::vector<std::string> keys;
    for (const auto& w : words) keys.push_back(query::singular_key(w));
    return text::join(keys, " ");
}

constexpr std::size_t kMaxPhraseWords = 4;

}  // namespace

std::vector<EventCandidate> extract_event_candidates(const ContentTree& tree, const PipelineResources& res) {
    if (!res.vocabulary) throw Error(ErrorCode::Internal, "pipeline has no vocabulary");
    const auto& vocab = *res.vocabulary;
    std::set<std::string> damage_keys;
    for (const auto& d : res.damage_terms) damage_keys.insert(singular_phrase(text::phrase_words(d)));

    EventCandidate c;
    c.article_id = tree.article_id;
    const auto views = sentence_views(tree);
    for (std::uint32_t si = 0; si < views.size(); ++si) {
        const auto& v = views[si];
        const auto n = v.leaves.size();
        auto words_of = [&](std::size_t b, std::size_t e, std::vector<std::string>& out) {
            out.clear();
            for (std::size_t k = b; k < e; ++k) {
                if (v.leaves[k]->punct) return false;
                out.push_back(v.leaves[k]->normalized);
            }
            return true;
        };
        std::vector<std::string> words;
        // Triggers: longest meteorological run first, outside named entities.
        for (std::size_t i = 0; i < n;) {
            std::size_t taken = 0;
            for (std::size_t len = std::min(kMaxPhraseWords, n - i); len > 0 && taken == 0; --len) {
                bool blocked = false;
                for (std::size_t k = i; k < i + len; ++k) blocked |= v.cover[k] != PosTag::OTHER;
                if (blocked || !words_of(i, i + len, words)) continue;
                const auto phrase = text::join(words, " ");
                std::string concept_term;
                if (vocab.is_meteorological(phrase)) concept_term = phrase;
                else if (const auto sing = singular_phrase(words); vocab.is_meteorological(sing)) concept_term = sing;
                if (concept_term.empty()) continue;
                c.triggers.push_back({phrase, concept_term, {si, v.leaves[i]->position, v.leaves[i + len - 1]->position + 1}});
                taken = len;
            }
            i += taken == 0 ? 1 : taken;
        }
        // Damage hints.
        for (std::size_t i = 0; i < n;) {
            std::size_t taken = 0;
            for (std::size_t len = std::min(kMaxPhraseWords, n - i); len > 0 && taken == 0; --len) {
                if (!words_of(i, i + len, words)) continue;
                if (!damage_keys.contains(singular_phrase(words))) continue;
                const auto phrase = text::join(words, " ");
                c.damage_hints.push_back({phrase, phrase, {si, v.leaves[i]->position, v.leaves[i + len - 1]->position + 1}});
                taken = len;
            }
            i += taken == 0 ? 1 : taken;
        }
    }
    if (c.triggers.empty()) return {};
    for (const auto& e : tree.entities) {
        if (e.kind == EntityKind::GPE) c.locations.push_back(e);
        else if (e.kind == EntityKind::DATE) c.dates.push_back(e);
        else if (e.kind == EntityKind::PERSON) c.persons.push_back(e);
    }
    return {std::move(c)};
}

namespace {

PipelineResult run_one(const corpus::Article& a, const PipelineResources& res) {
    PipelineResult r;
    r.tree = build_content_tree(a, res);
    r.candidates = extract_event_candidates(r.tree, res);
    return r;
}

}  // namespace

std::vector<PipelineResult> run_pipeline(std::span<const corpus::Article> articles, const PipelineResources& res) {
    std::vector<PipelineResult> out(articles.size());
    std::vector<std::exception_ptr> errors(articles.size());
    const auto n = static_cast<std::ptrdiff_t>(articles.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = run_one(articles[k], res);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<PipelineResult> run_pipeline_serial(std::span<const corpus::Article> articles, const PipelineResources& res) {
    std::vector<PipelineResult> out;
    out.reserve(articles.size());
    for (const auto& a : articles) out.push_back(run_one(a, res));
    return out;
}

}  // namespace hemeroteca::lingpipe
