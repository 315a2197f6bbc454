#include "hemeroteca/curation/task.hpp"

#include <algorithm>
#include <array>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::curation {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 8> kActionNames{"correct_term",   "set_event_name", "confirm_location",
                                                       "reject_location", "set_date",       "set_duration",
                                                       "add_damage",      "reject_metaphor"};

json range_json(const DateRange& r) { return {{"start", r.start.to_string()}, {"end", r.end.to_string()}}; }

DateRange range_from(const json& j) {
    return {PartialDate::parse(j.at("start").get<std::string>()), PartialDate::parse(j.at("end").get<std::string>())};
}

json opt_range(const std::optional<DateRange>& r) { return r ? range_json(*r) : json(nullptr); }

std::optional<DateRange> opt_range_from(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return range_from(*it);
}

const std::string& payload_string(const AnalystAction& a, const char* key) {
    auto it = a.payload.find(key);
    if (it == a.payload.end() || !it->is_string())
        throw Error(ErrorCode::ValidationFailed,
                    std::string(action_name(a.kind)) + " needs a string \"" + key + "\" field");
    return it->get_ref<const std::string&>();
}

bool has(const AnalystAction& a, const char* key) { return a.payload.is_object() && a.payload.contains(key); }

Error unknown_span(const std::string& key) { return Error(ErrorCode::ValidationFailed, "unknown span", {key}); }

DateRange parse_range(const std::string& text) {
    auto r = parse_date_expression(text);
    if (!r) throw Error(ErrorCode::ValidationFailed, "unparseable date '" + text + "'");
    return *r;
}

void rerank(CurationTask& t) {
    geo::RankContext ctx;
    ctx.newspaper_country = t.newspaper_country;
    for (const auto& [key, p] : t.proposed_geo)
        if (p.chosen) ctx.nearby_confirmed_points.push_back(p.chosen->point());
    for (auto& [key, p] : t.proposed_geo)
        if (!p.chosen && !p.rejected) p.candidates = geo::rank_candidates(std::move(p.candidates), ctx);
}

template <typename Spans>
auto find_span(const Spans& spans, const std::string& key) {
    return std::find_if(spans.begin(), spans.end(), [&](const auto& s) { return s.span.key() == key; });
}

}  // namespace

std::string_view status_name(TaskStatus s) noexcept {
    switch (s) {
        case TaskStatus::Pending: return "pending";
        case TaskStatus::InReview: return "in_review";
        case TaskStatus::Confirmed: return "confirmed";
        case TaskStatus::Rejected: return "rejected";
    }
    return "pending";
}

std::optional<TaskStatus> parse_status(std::string_view s) noexcept {
    for (auto st : {TaskStatus::Pending, TaskStatus::InReview, TaskStatus::Confirmed, TaskStatus::Rejected})
        if (status_name(st) == s) return st;
    return std::nullopt;
}

std::string_view action_name(ActionKind k) noexcept { return kActionNames[static_cast<std::size_t>(k)]; }

std::optional<ActionKind> parse_action(std::string_view s) noexcept {
    for (std::size_t i = 0; i < kActionNames.size(); ++i)
        if (kActionNames[i] == s) return static_cast<ActionKind>(i);
    return std::nullopt;
}

json to_json(const AnalystAction& a) {
    json j{{"kind", action_name(a.kind)}, {"payload", a.payload}, {"timestamp", a.timestamp}};
    if (!a.analyst.empty()) j["analyst"] = a.analyst;
    return j;
}

AnalystAction action_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw Error(ErrorCode::ValidationFailed, "action needs a \"kind\"");
    const auto kind = parse_action(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::ValidationFailed, "unknown action kind: " + j.at("kind").get<std::string>());
    AnalystAction a;
    a.kind = *kind;
    a.payload = j.value("payload", json::object());
    if (!a.payload.is_object()) throw Error(ErrorCode::ValidationFailed, "action payload must be an object");
    a.analyst = j.value("analyst", std::string{});
    a.timestamp = j.value("timestamp", std::string{});
    return a;
}

std::vector<geo::GazetteerEntry> GeoProposal::proposed() const {
    if (chosen) return {*chosen};
    if (rejected) return {};
    return candidates;
}

std::vector<std::string> CurationTask::missing_slots() const {
    std::vector<std::string> missing;
    if (validated_terms.empty()) missing.emplace_back("trigger");
    if (std::none_of(proposed_geo.begin(), proposed_geo.end(), [](const auto& kv) { return kv.second.chosen.has_value(); }))
        missing.emplace_back("location");
    if (!date) missing.emplace_back("date");
    return missing;
}

std::string task_id_for(const std::string& article_id) { return "task:" + article_id; }

CurationTask make_task(const lingpipe::EventCandidate& candidate, const std::string& newspaper_country,
                       const PartialDate& article_date, const geo::Gazetteer& gazetteer) {
    CurationTask t;
    t.id = task_id_for(candidate.article_id);
    t.candidate = candidate;
    t.newspaper_country = newspaper_country;
    t.article_date = article_date;
    for (const auto& loc : candidate.locations) {
        GeoProposal p;
        p.text = loc.text;
        p.candidates = gazetteer.resolve(loc.text);
        t.proposed_geo.emplace(loc.span.key(), std::move(p));
    }
    for (const auto& d : candidate.dates) {
        std::optional<DateRange> r;
        if (d.canonical.starts_with("--") && d.canonical.size() == 7) {
            // Day and month without a year: assume the article's year.
            r = parse_date_expression(std::to_string(article_date.year()) + d.canonical.substr(1));
        } else {
            r = parse_date_expression(d.canonical);
        }
        if (r) t.proposed_dates.push_back({d.span.key(), *r});
    }
    t.proposed_dates.push_back({"article", DateRange::of(article_date)});
    rerank(t);
    return t;
}

CurationTask apply_action(CurationTask t, const AnalystAction& a) {
    if (t.closed()) throw Error(ErrorCode::Conflict, "task closed", {t.id, std::string(status_name(t.status))});
    switch (a.kind) {
        case ActionKind::CorrectTerm: {
            const auto& key = payload_string(a, "span");
            auto hit = find_span(t.candidate.triggers, key);
            if (hit == t.candidate.triggers.end()) throw unknown_span(key);
            if (a.payload.value("reject", false)) {
                t.validated_terms.erase(key);
                t.rejected_terms.insert(key);
            } else if (a.payload.value("accept", false)) {
                t.validated_terms[key] = hit->term;
                t.rejected_terms.erase(key);
            } else {
                const auto term = text::normalize_phrase(payload_string(a, "term"));
                if (term.empty()) throw Error(ErrorCode::ValidationFailed, "corrected term is empty");
                t.validated_terms[key] = term;
                t.rejected_terms.erase(key);
            }
            break;
        }
        case ActionKind::SetEventName: {
            if (has(a, "span")) {
                const auto& key = payload_string(a, "span");
                auto p = find_span(t.candidate.persons, key);
                if (p == t.candidate.persons.end()) throw unknown_span(key);
                t.event_name = p->canonical.empty() ? p->text : p->canonical;
            } else {
                const auto name = text::trim(payload_string(a, "name"));
                if (name.empty()) throw Error(ErrorCode::ValidationFailed, "event name is empty");
                t.event_name = name;
            }
            break;
        }
        case ActionKind::ConfirmLocation: {
            const auto& key = payload_string(a, "span");
            auto it = t.proposed_geo.find(key);
            if (it == t.proposed_geo.end()) throw unknown_span(key);
            const auto idx = a.payload.find("candidate");
            if (idx == a.payload.end() || !idx->is_number_integer())
                throw Error(ErrorCode::ValidationFailed, "confirm_location needs an integer \"candidate\"");
            const auto i = idx->get<long long>();
            auto& p = it->second;
            if (i < 0 || static_cast<std::size_t>(i) >= p.candidates.size())
                throw Error(ErrorCode::ValidationFailed, "candidate index out of range",
                            {key, std::to_string(i), std::to_string(p.candidates.size())});
            p.chosen = p.candidates[static_cast<std::size_t>(i)];
            p.rejected = false;
            rerank(t);
            break;
        }
        case ActionKind::RejectLocation: {
            const auto& key = payload_string(a, "span");
            auto it = t.proposed_geo.find(key);
            if (it == t.proposed_geo.end()) throw unknown_span(key);
            it->second.chosen.reset();
            it->second.rejected = true;
            rerank(t);
            break;
        }
        case ActionKind::SetDate: {
            if (has(a, "span")) {
                const auto& key = payload_string(a, "span");
                auto p = std::find_if(t.proposed_dates.begin(), t.proposed_dates.end(),
                                      [&](const DateProposal& d) { return d.source == key; });
                if (p == t.proposed_dates.end()) throw unknown_span(key);
                t.date = p->range;
            } else {
                t.date = parse_range(payload_string(a, "value"));
            }
            break;
        }
        case ActionKind::SetDuration: {
            const auto init = parse_range(payload_string(a, "init"));
            const auto end = parse_range(payload_string(a, "end"));
            DateRange d{init.start, end.end};
            if (d.first_day() > d.last_day()) throw Error(ErrorCode::ValidationFailed, "duration init after end");
            t.duration = d;
            break;
        }
        case ActionKind::AddDamage: {
            if (has(a, "span")) {
                const auto& key = payload_string(a, "span");
                auto h = find_span(t.candidate.damage_hints, key);
                if (h == t.candidate.damage_hints.end()) throw unknown_span(key);
                t.damages.insert(h->term);
            } else {
                const auto term = text::normalize_phrase(payload_string(a, "term"));
                if (term.empty()) throw Error(ErrorCode::ValidationFailed, "damage term is empty");
                t.damages.insert(term);
            }
            break;
        }
        case ActionKind::RejectMetaphor:
            t.status = TaskStatus::Rejected;
            t.candidate.status = lingpipe::CandidateStatus::Rejected;
            break;
    }
    if (t.status == TaskStatus::Pending) t.status = TaskStatus::InReview;
    t.log.push_back(a);
    return t;
}

CurationTask replay(const CurationTask& initial, const std::vector<AnalystAction>& log) {
    CurationTask t = initial;
    for (const auto& a : log) t = apply_action(std::move(t), a);
    return t;
}

CurationTask mark_promoted(CurationTask t, const std::string& event_id) {
    t.status = TaskStatus::Confirmed;
    t.candidate.status = lingpipe::CandidateStatus::Confirmed;
    t.event_id = event_id;
    return t;
}

json to_json(const CurationTask& t) {
    json geo = json::object();
    for (const auto& [key, p] : t.proposed_geo) {
        json cands = json::array();
        for (const auto& e : p.candidates) cands.push_back(geo::to_json(e));
        json proposed = json::array();
        for (const auto& e : p.proposed()) proposed.push_back(geo::to_json(e));
        geo[key] = {{"text", p.text},
                    {"state", p.chosen ? "confirmed" : p.rejected ? "rejected" : "open"},
                    {"candidates", cands},
                    {"proposed", proposed},
                    {"chosen", p.chosen ? geo::to_json(*p.chosen) : json(nullptr)}};
    }
    json dates = json::array();
    for (const auto& d : t.proposed_dates) dates.push_back({{"source", d.source}, {"range", range_json(d.range)}});
    json log = json::array();
    for (const auto& a : t.log) log.push_back(to_json(a));
    return {{"id", t.id},
            {"status", status_name(t.status)},
            {"version", t.version()},
            {"article_id", t.candidate.article_id},
            {"newspaper_country", t.newspaper_country},
            {"article_date", t.article_date.to_string()},
            {"candidate", lingpipe::to_json(t.candidate)},
            {"proposed_geo", geo},
            {"proposed_dates", dates},
            {"validated_terms", t.validated_terms},
            {"rejected_terms", t.rejected_terms},
            {"event_name", t.event_name ? json(*t.event_name) : json(nullptr)},
            {"date", opt_range(t.date)},
            {"duration", opt_range(t.duration)},
            {"damages", t.damages},
            {"missing", t.missing_slots()},
            {"log", log},
            {"event_id", t.event_id ? json(*t.event_id) : json(nullptr)}};
}

CurationTask task_from_json(const json& j) {
    try {
        CurationTask t;
        t.id = j.at("id").get<std::string>();
        const auto status = j.at("status").get<std::string>();
        const auto parsed = parse_status(status);
        if (!parsed) throw Error(ErrorCode::ValidationFailed, "unknown task status: " + status);
        t.status = *parsed;
        t.candidate = lingpipe::candidate_from_json(j.at("candidate"));
        t.newspaper_country = j.at("newspaper_country").get<std::string>();
        t.article_date = PartialDate::parse(j.at("article_date").get<std::string>());
        for (const auto& [key, p] : j.at("proposed_geo").items()) {
            GeoProposal g;
            g.text = p.at("text").get<std::string>();
            for (const auto& e : p.at("candidates")) g.candidates.push_back(geo::gazetteer_entry_from_json(e));
            if (auto c = p.find("chosen"); c != p.end() && !c->is_null()) g.chosen = geo::gazetteer_entry_from_json(*c);
            g.rejected = p.at("state").get<std::string>() == "rejected";
            t.proposed_geo.emplace(key, std::move(g));
        }
        for (const auto& d : j.at("proposed_dates"))
            t.proposed_dates.push_back({d.at("source").get<std::string>(), range_from(d.at("range"))});
        t.validated_terms = j.at("validated_terms").get<std::map<std::string, std::string>>();
        t.rejected_terms = j.at("rejected_terms").get<std::set<std::string>>();
        if (auto n = j.find("event_name"); n != j.end() && !n->is_null()) t.event_name = n->get<std::string>();
        t.date = opt_range_from(j, "date");
        t.duration = opt_range_from(j, "duration");
        t.damages = j.at("damages").get<std::set<std::string>>();
        for (const auto& a : j.at("log")) t.log.push_back(action_from_json(a));
        if (auto e = j.find("event_id"); e != j.end() && !e->is_null()) t.event_id = e->get<std::string>();
        return t;
    } catch (const json::exception& ex) {
        throw Error(ErrorCode::ValidationFailed, std::string("malformed task record: ") + ex.what());
    }
}

}  // namespace hemeroteca::curation
