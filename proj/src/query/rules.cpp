#include "hemeroteca/query/rules.hpp"

#include <algorithm>
#include <fstream>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/vocab/vocabulary.hpp"

namespace hemeroteca::query {

using nlohmann::json;

std::vector<DomainRule> parse_rules(std::istream& in) {
    std::vector<DomainRule> rules;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = text::trim(line);
        if (t.empty() || t[0] == '#') continue;
        try {
            const auto j = json::parse(t);
            DomainRule r;
            r.id = j.at("id").get<std::string>();
            r.trigger = text::normalize_phrase(j.at("trigger").get<std::string>());
            r.note = j.value("note", std::string{});
            if (r.id.empty() || r.trigger.empty()) throw Error(ErrorCode::ValidationFailed, "empty id or trigger");
            for (const auto& imp : j.at("implications")) {
                Implication i;
                i.constraint = constraint_from_json(imp);
                if (auto w = imp.find("when"); w != imp.end()) i.when = constraint_from_json(*w);
                i.note = imp.value("note", std::string{});
                r.implications.push_back(std::move(i));
            }
            if (std::any_of(rules.begin(), rules.end(), [&](const DomainRule& o) { return o.id == r.id; }))
                throw Error(ErrorCode::ValidationFailed, "duplicate rule id " + r.id);
            rules.push_back(std::move(r));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ValidationFailed, "rule line " + std::to_string(line_no) + ": " + e.what());
        } catch (const Error& e) {
            throw Error(ErrorCode::ValidationFailed, "rule line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rules;
}

std::vector<DomainRule> load_rules(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw not_found("rule file " + path);
    return parse_rules(in);
}

json to_json(const DomainRule& r) {
    json imps = json::array();
    for (const auto& i : r.implications) {
        auto j = to_json(i.constraint);
        if (i.when) j["when"] = to_json(*i.when);
        if (!i.note.empty()) j["note"] = i.note;
        imps.push_back(j);
    }
    json out{{"id", r.id}, {"trigger", r.trigger}, {"implications", imps}};
    if (!r.note.empty()) out["note"] = r.note;
    return out;
}

void validate_rules(const std::vector<DomainRule>& rules, const vocab::Vocabulary& vocab) {
    for (const auto& r : rules)
        if (!vocab.is_meteorological(r.trigger))
            throw Error(ErrorCode::ValidationFailed, "rule " + r.id + ": trigger '" + r.trigger +
                                                         "' is not in the meteorological vocabulary");
}

std::string singular_key(std::string_view word) {
    auto w = text::shadow_key(word);
    const auto n = w.size();
    if (n > 4 && w.ends_with("es")) {
        const char before = w[n - 3];
        if (before == 'l' || before == 'r' || before == 'n' || before == 'd' || before == 'j') return w.substr(0, n - 2);
        if (before == 'c' && n > 5) return w.substr(0, n - 3) + "z";  // luces -> luz
    }
    if (n > 3 && w.back() == 's') return w.substr(0, n - 1);
    return w;
}

bool phrase_matches_trigger(const std::vector<std::string>& phrase, std::string_view trigger) {
    std::vector<std::string> have;
    for (const auto& w : phrase) have.push_back(singular_key(w));
    for (const auto& w : text::phrase_words(trigger)) {
        auto it = std::find(have.begin(), have.end(), singular_key(w));
        if (it == have.end()) return false;
        have.erase(it);
    }
    return true;
}

}  // namespace hemeroteca::query
