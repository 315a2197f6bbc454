#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hemeroteca/common/partial_date.hpp"
#include "hemeroteca/geo/gazetteer.hpp"
#include "hemeroteca/lingpipe/pipeline.hpp"

namespace hemeroteca::curation {

enum class TaskStatus { Pending, InReview, Confirmed, Rejected };
std::string_view status_name(TaskStatus s) noexcept;
std::optional<TaskStatus> parse_status(std::string_view s) noexcept;

enum class ActionKind {
    CorrectTerm,
    SetEventName,
    ConfirmLocation,
    RejectLocation,
    SetDate,
    SetDuration,
    AddDamage,
    RejectMetaphor,
};
std::string_view action_name(ActionKind k) noexcept;
std::optional<ActionKind> parse_action(std::string_view s) noexcept;

/// One analyst decision. Payloads by kind:
///   correct_term      {"span", "term"} | {"span", "accept": true} | {"span", "reject": true}
///   set_event_name    {"span"} (a PERSON span) | {"name"}
///   confirm_location  {"span", "candidate": <0-based index into the span's proposals>}
///   reject_location   {"span"}
///   set_date          {"span"} (a DATE span) | {"value": "<date expression>"}
///   set_duration      {"init", "end"}
///   add_damage        {"term"} | {"span"} (a damage hint)
///   reject_metaphor   {}
struct AnalystAction {
    ActionKind kind = ActionKind::CorrectTerm;
    nlohmann::json payload = nlohmann::json::object();
    std::string analyst;
    std::string timestamp;  // ISO-8601 UTC

    friend bool operator==(const AnalystAction&, const AnalystAction&) = default;
};

nlohmann::json to_json(const AnalystAction& a);
AnalystAction action_from_json(const nlohmann::json& j);

/// Gazetteer candidates for one location span. `candidates` is the full
/// ranked list; once confirmed the proposal collapses to the chosen entry.
struct GeoProposal {
    std::string text;
    std::vector<geo::GazetteerEntry> candidates;
    std::optional<geo::GazetteerEntry> chosen;
    bool rejected = false;

    std::vector<geo::GazetteerEntry> proposed() const;
    friend bool operator==(const GeoProposal&, const GeoProposal&) = default;
};

struct DateProposal {
    std::string source;  // DATE span key, or "article" for the publication date
    DateRange range;

    friend bool operator==(const DateProposal&, const DateProposal&) = default;
};

struct CurationTask {
    std::string id;
    lingpipe::EventCandidate candidate;
    std::string newspaper_country;
    PartialDate article_date;

    std::map<std::string, GeoProposal> proposed_geo;  // by span key
    std::vector<DateProposal> proposed_dates;

    std::map<std::string, std::string> validated_terms;  // trigger span key -> term
    std::set<std::string> rejected_terms;                // trigger span keys
    std::optional<std::string> event_name;
    std::optional<DateRange> date;
    std::optional<DateRange> duration;
    std::set<std::string> damages;

    TaskStatus status = TaskStatus::Pending;
    std::vector<AnalystAction> log;
    std::optional<std::string> event_id;

    /// Number of actions applied; the expected version for the next action.
    std::size_t version() const { return log.size(); }
    bool closed() const { return status == TaskStatus::Confirmed || status == TaskStatus::Rejected; }
    /// Slots still missing for promotion, among "trigger", "location", "date".
    std::vector<std::string> missing_slots() const;
    friend bool operator==(const CurationTask&, const CurationTask&) = default;
};

std::string task_id_for(const std::string& article_id);

/// Wraps a candidate with ranked geo proposals (newspaper-country context)
/// and date proposals.
CurationTask make_task(const lingpipe::EventCandidate& candidate, const std::string& newspaper_country,
                       const PartialDate& article_date, const geo::Gazetteer& gazetteer);

/// Pure state transition. Throws Error(Conflict, "task closed"),
/// Error(ValidationFailed, "unknown span") or Error(ValidationFailed) for
/// malformed payloads. The action is appended to the log.
CurationTask apply_action(CurationTask task, const AnalystAction& action);

/// Replays an action log over an initial task.
CurationTask replay(const CurationTask& initial, const std::vector<AnalystAction>& log);

/// Confirms the task and records the event it produced.
CurationTask mark_promoted(CurationTask task, const std::string& event_id);

nlohmann::json to_json(const CurationTask& t);
CurationTask task_from_json(const nlohmann::json& j);

}  // namespace hemeroteca::curation
