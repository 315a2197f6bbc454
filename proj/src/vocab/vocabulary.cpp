#include "hemeroteca/vocab/vocabulary.hpp"

#include <deque>
#include <fstream>
#include <mutex>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/corpus/article.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::vocab {

using nlohmann::json;

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        cols.push_back(text::trim(line.substr(start, tab == std::string::npos ? tab : tab - start)));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return cols;
}

bool skip_line(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = text::trim(line);
    return t.empty() || t[0] == '#';
}

std::string norm_term(std::string_view t) {
    auto n = text::normalize_phrase(t);
    if (n.empty()) throw Error(ErrorCode::ValidationFailed, "empty term");
    return n;
}

}  // namespace

std::string_view register_name(Register r) noexcept {
    return r == Register::Colloquial ? "colloquial" : "scientific";
}

Register parse_register(std::string_view s) {
    if (s == "colloquial") return Register::Colloquial;
    if (s == "scientific") return Register::Scientific;
    throw Error(ErrorCode::ValidationFailed, "unknown register: " + std::string(s));
}

std::string_view origin_name(Origin o) noexcept { return o == Origin::Seed ? "seed" : "analyst"; }

std::string_view relation_name(RelationKind k) noexcept {
    switch (k) {
        case RelationKind::Synonym: return "synonym";
        case RelationKind::Hypernym: return "hypernym";
        case RelationKind::CulturalEquivalent: return "cultural_equivalent";
        case RelationKind::ScientificEquivalent: return "scientific_equivalent";
    }
    return "synonym";
}

RelationKind parse_relation(std::string_view s) {
    for (auto k : {RelationKind::Synonym, RelationKind::Hypernym, RelationKind::CulturalEquivalent,
                   RelationKind::ScientificEquivalent})
        if (relation_name(k) == s) return k;
    throw Error(ErrorCode::ValidationFailed, "unknown relation kind: " + std::string(s));
}

json to_json(const VocabEntry& e) {
    return {{"term", e.term}, {"country", e.country}, {"register", register_name(e.register_)},
            {"added_by", origin_name(e.added_by)}};
}

json to_json(const TermRelation& r) {
    json j{{"from", r.from}, {"to", r.to}, {"kind", relation_name(r.kind)}};
    if (!r.country.empty()) j["country"] = r.country;
    return j;
}

void Vocabulary::load_resources(const std::filesystem::path& dir) {
    const auto folk = dir / "folksonomy";
    if (std::filesystem::exists(folk)) {
        std::vector<std::filesystem::path> files;
        for (const auto& f : std::filesystem::directory_iterator(folk))
            if (f.path().extension() == ".tsv") files.push_back(f.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::ifstream in(f);
            load_folksonomy(f.stem().string(), in);
        }
    }
    std::ifstream thesaurus(dir / "thesaurus.tsv");
    if (!thesaurus) throw not_found("thesaurus file in " + dir.string());
    load_thesaurus(thesaurus);
}

void Vocabulary::load_thesaurus(std::istream& in) {
    std::unique_lock lock(mutex_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) continue;
        auto cols = split_tabs(line);
        if (cols.size() < 3 || cols.size() > 4)
            throw Error(ErrorCode::ValidationFailed, "thesaurus line " + std::to_string(line_no) + ": expected 3 or 4 columns");
        const auto kind = parse_relation(cols[1]);
        link_locked(norm_term(cols[0]), norm_term(cols[2]), kind, cols.size() == 4 ? cols[3] : std::string{},
                    Origin::Seed);
    }
}

void Vocabulary::load_folksonomy(const std::string& country, std::istream& in) {
    std::unique_lock lock(mutex_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (skip_line(line)) continue;
        auto cols = split_tabs(line);
        if (cols.size() < 2)
            throw Error(ErrorCode::ValidationFailed, "folksonomy " + country + " line " + std::to_string(line_no) +
                                                         ": expected term and register");
        const auto term = norm_term(cols[0]);
        add_term_locked(term, country, parse_register(cols[1]), Origin::Seed);
        if (cols.size() >= 3 && !cols[2].empty())
            link_locked(term, norm_term(cols[2]), RelationKind::CulturalEquivalent, country, Origin::Seed);
    }
}

void Vocabulary::attach_journal(const std::filesystem::path& file) {
    {
        std::ifstream in(file);
        std::string line;
        std::unique_lock lock(mutex_);
        while (in && std::getline(in, line)) {
            if (text::trim(line).empty()) continue;
            const auto rec = json::parse(line);
            const auto op = rec.at("op").get<std::string>();
            if (op == "add") {
                add_term_locked(rec.at("term"), rec.at("country"), parse_register(rec.at("register").get<std::string>()),
                                Origin::Analyst);
            } else if (op == "link") {
                link_locked(rec.at("from"), rec.at("to"), parse_relation(rec.at("kind").get<std::string>()),
                            rec.value("country", std::string{}), Origin::Analyst);
            }
        }
    }
    std::unique_lock lock(mutex_);
    journal_ = file;
}

void Vocabulary::journal(const json& record) const {
    if (!journal_) return;
    std::ofstream out(*journal_, std::ios::app);
    out << record.dump() << '\n';
}

VocabEntry Vocabulary::add_term(std::string_view term, const std::string& country, Register reg, Origin origin) {
    const auto t = norm_term(term);
    if (country != kPanRegional && !corpus::CountryRegistry::instance().supported(country))
        throw Error(ErrorCode::ValidationFailed, "unsupported country: " + country);
    std::unique_lock lock(mutex_);
    const bool existed = entries_.contains({t, country});
    auto e = add_term_locked(t, country, reg, origin);
    if (!existed && origin == Origin::Analyst)
        journal({{"op", "add"}, {"term", t}, {"country", country}, {"register", register_name(reg)}});
    return e;
}

VocabEntry Vocabulary::add_term_locked(const std::string& term, const std::string& country, Register reg,
                                       Origin origin) {
    auto [it, inserted] = entries_.try_emplace({term, country}, VocabEntry{term, country, reg, origin});
    if (inserted) shadow_terms_.insert(text::strip_accents(term));
    return it->second;
}

void Vocabulary::ensure_pan_regional(const std::string& term) {
    auto it = entries_.lower_bound({term, std::string{}});
    if (it != entries_.end() && it->first.first == term) return;
    add_term_locked(term, std::string(kPanRegional), Register::Scientific, Origin::Seed);
}

TermRelation Vocabulary::link_terms(std::string_view from, std::string_view to, RelationKind kind,
                                    const std::optional<std::string>& country, Origin origin) {
    const auto f = norm_term(from);
    const auto t = norm_term(to);
    const auto c = country.value_or(std::string{});
    std::unique_lock lock(mutex_);
    const auto before = relations_.size();
    auto rel = link_locked(f, t, kind, c, origin);
    if (relations_.size() != before && origin == Origin::Analyst) {
        json rec{{"op", "link"}, {"from", f}, {"to", t}, {"kind", relation_name(kind)}};
        if (!rel.country.empty()) rec["country"] = rel.country;
        journal(rec);
    }
    return rel;
}

TermRelation Vocabulary::link_locked(const std::string& from, const std::string& to, RelationKind kind,
                                     const std::string& country, Origin origin) {
    if (from == to) {
        if (kind == RelationKind::Hypernym) throw Error(ErrorCode::Conflict, "cycle");
        throw Error(ErrorCode::ValidationFailed, "a term cannot be related to itself");
    }
    std::string scope;
    if (kind == RelationKind::CulturalEquivalent) {
        if (country.empty()) throw Error(ErrorCode::ValidationFailed, "cultural_equivalent needs a target country");
        if (!corpus::CountryRegistry::instance().supported(country))
            throw Error(ErrorCode::ValidationFailed, "unsupported country: " + country);
        scope = country;
    }
    TermRelation rel{from, to, kind, scope};
    if (kind == RelationKind::Synonym && rel.to < rel.from) std::swap(rel.from, rel.to);
    const RelKey key{rel.from, rel.to, rel.kind, rel.country};
    if (relation_keys_.contains(key)) return rel;
    if (kind == RelationKind::Hypernym && reaches_by_hypernym(to, from)) throw Error(ErrorCode::Conflict, "cycle");

    if (kind == RelationKind::CulturalEquivalent) {
        add_term_locked(from, scope, Register::Colloquial, origin);
        ensure_pan_regional(to);
    } else {
        ensure_pan_regional(from);
        ensure_pan_regional(to);
    }
    relation_keys_.insert(key);
    relations_.push_back(rel);
    return rel;
}

bool Vocabulary::reaches_by_hypernym(const std::string& from, const std::string& target) const {
    std::set<std::string> seen{from};
    std::deque<std::string> queue{from};
    while (!queue.empty()) {
        const auto cur = queue.front();
        queue.pop_front();
        if (cur == target) return true;
        for (const auto& r : relations_)
            if (r.kind == RelationKind::Hypernym && r.from == cur && seen.insert(r.to).second) queue.push_back(r.to);
    }
    return false;
}

Expansion Vocabulary::expand_term(std::string_view term, ExpandKinds kinds, int depth) const {
    const auto t = text::normalize_phrase(term);
    Expansion out;
    if (t.empty() || depth < 1) return out;
    std::shared_lock lock(mutex_);

    auto walk = [&](auto&& neighbours, std::set<std::string>& into) {
        std::set<std::string> frontier{t};
        for (int hop = 0; hop < depth && !frontier.empty(); ++hop) {
            std::set<std::string> next;
            for (const auto& r : relations_) {
                for (const auto& n : neighbours(r, frontier))
                    if (n != t && into.insert(n).second) next.insert(n);
            }
            frontier = std::move(next);
        }
    };
    using Set = std::set<std::string>;
    if (kinds.synonyms)
        walk([](const TermRelation& r, const Set& f) {
            std::vector<std::string> v;
            if (r.kind != RelationKind::Synonym) return v;
            if (f.contains(r.from)) v.push_back(r.to);
            if (f.contains(r.to)) v.push_back(r.from);
            return v;
        }, out.synonyms);
    if (kinds.hypernyms)
        walk([](const TermRelation& r, const Set& f) {
            std::vector<std::string> v;
            if (r.kind == RelationKind::Hypernym && f.contains(r.from)) v.push_back(r.to);
            return v;
        }, out.hypernyms);
    if (kinds.hyponyms)
        walk([](const TermRelation& r, const Set& f) {
            std::vector<std::string> v;
            if (r.kind == RelationKind::Hypernym && f.contains(r.to)) v.push_back(r.from);
            return v;
        }, out.hyponyms);
    return out;
}

std::set<std::string> Vocabulary::cultural_equivalents(std::string_view term, const std::string& country) const {
    const auto t = text::normalize_phrase(term);
    std::set<std::string> out;
    if (t.empty()) return out;
    std::shared_lock lock(mutex_);
    std::set<std::string> pivots{t};
    for (const auto& r : relations_)
        if ((r.kind == RelationKind::CulturalEquivalent || r.kind == RelationKind::ScientificEquivalent) && r.from == t)
            pivots.insert(r.to);
    for (const auto& r : relations_)
        if (r.kind == RelationKind::CulturalEquivalent && r.country == country && pivots.contains(r.to) && r.from != t)
            out.insert(r.from);
    return out;
}

std::set<std::string> Vocabulary::supported_countries() const {
    std::shared_lock lock(mutex_);
    std::set<std::string> out;
    for (const auto& [key, e] : entries_)
        if (e.country != kPanRegional) out.insert(e.country);
    return out;
}

bool Vocabulary::is_meteorological(std::string_view normalized_term) const {
    std::shared_lock lock(mutex_);
    return shadow_terms_.contains(text::strip_accents(normalized_term));
}

std::set<std::string> Vocabulary::meteorological_terms() const {
    std::shared_lock lock(mutex_);
    std::set<std::string> out;
    for (const auto& [key, e] : entries_) out.insert(e.term);
    return out;
}

std::vector<VocabEntry> Vocabulary::entries() const {
    std::shared_lock lock(mutex_);
    std::vector<VocabEntry> out;
    for (const auto& [key, e] : entries_) out.push_back(e);
    return out;
}

std::vector<TermRelation> Vocabulary::relations() const {
    std::shared_lock lock(mutex_);
    return relations_;
}

std::optional<VocabEntry> Vocabulary::entry(std::string_view term, const std::string& country) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find({text::normalize_phrase(term), country});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

}  // namespace hemeroteca::vocab
