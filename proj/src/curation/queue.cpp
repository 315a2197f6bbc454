#include "hemeroteca/curation/queue.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <mutex>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/common/fileio.hpp"
#include "hemeroteca/events/analytics.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::curation {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kLogName = "tasks.log";

bool fifo_before(const CurationTask& a, const CurationTask& b) {
    if (a.article_date != b.article_date) return a.article_date < b.article_date;
    return a.id < b.id;
}

std::optional<std::string> name_key(const std::optional<std::string>& name) {
    if (!name) return std::nullopt;
    return text::strip_accents(text::normalize_phrase(*name));
}

void merge_into(events::ClimateEvent& into, const events::ClimateEvent& from) {
    into.articles.insert(from.articles.begin(), from.articles.end());
    into.damages.insert(from.damages.begin(), from.damages.end());
    into.terms.insert(from.terms.begin(), from.terms.end());
    for (const auto& p : from.scope)
        if (std::find(into.scope.begin(), into.scope.end(), p) == into.scope.end()) into.scope.push_back(p);
}

}  // namespace

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

bool TaskFilter::matches(const CurationTask& t) const {
    if (status ? t.status != *status : t.closed()) return false;
    if (country && t.newspaper_country != *country) return false;
    if (article_id && t.candidate.article_id != *article_id) return false;
    return true;
}

bool same_event(const events::ClimateEvent& a, const events::ClimateEvent& b) {
    if (name_key(a.name) != name_key(b.name)) return false;
    if (!a.time_span().intersects(b.time_span())) return false;
    for (const auto& p : a.scope)
        for (const auto& q : b.scope)
            if (geo::distance_km(p.point(), q.point()) <= kMergeRadiusKm) return true;
    return false;
}

events::ClimateEvent event_from_task(const CurationTask& t) {
    if (auto missing = t.missing_slots(); !missing.empty())
        throw Error(ErrorCode::ValidationFailed, "task is missing: " + text::join(missing, ", "), missing);
    events::ClimateEvent e;
    e.date = t.date->start;
    if (t.duration) e.duration = t.duration;
    else if (t.date->start != t.date->end) e.duration = t.date;
    for (const auto& [key, p] : t.proposed_geo)
        if (p.chosen) e.scope.push_back({p.chosen->display_name, p.chosen->lon, p.chosen->lat, p.chosen->country});
    e.name = t.event_name;
    e.damages = t.damages;
    for (const auto& [key, term] : t.validated_terms) e.terms.insert(term);
    e.articles.insert(t.candidate.article_id);
    return e;
}

CurationQueue::CurationQueue(const geo::Gazetteer& gazetteer, std::optional<fs::path> directory)
    : gazetteer_(gazetteer), dir_(std::move(directory)) {
    if (dir_) {
        fs::create_directories(*dir_);
        load();
    }
}

void CurationQueue::load() {
    std::size_t line_no = 0;
    for (const auto& line : read_lines(*dir_ / kLogName)) {
        ++line_no;
        try {
            const auto rec = json::parse(line);
            const auto op = rec.at("op").get<std::string>();
            if (op == "enqueue") {
                auto t = task_from_json(rec.at("task"));
                const auto id = t.id;
                tasks_.try_emplace(id, Entry{t, t});
            } else if (op == "action") {
                auto& e = tasks_.at(rec.at("task").get<std::string>());
                e.current = apply_action(std::move(e.current), action_from_json(rec.at("action")));
            } else if (op == "promote") {
                auto& e = tasks_.at(rec.at("task").get<std::string>());
                e.current = mark_promoted(std::move(e.current), rec.at("event_id").get<std::string>());
            } else {
                throw Error(ErrorCode::ValidationFailed, "unknown op " + op);
            }
        } catch (const std::exception& ex) {
            throw Error(ErrorCode::Internal, "corrupt task log line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
}

void CurationQueue::record(const json& rec) {
    if (dir_) append_line(*dir_ / kLogName, rec.dump());
}

const CurationQueue::Entry& CurationQueue::entry(const std::string& task_id) const {
    auto it = tasks_.find(task_id);
    if (it == tasks_.end()) throw not_found("task " + task_id);
    return it->second;
}

std::vector<CurationTask> CurationQueue::enqueue(std::span<const lingpipe::EventCandidate> candidates,
                                                 const corpus::ArticleStore& articles) {
    std::unique_lock lock(mutex_);
    std::vector<CurationTask> out;
    for (const auto& c : candidates) {
        const auto id = task_id_for(c.article_id);
        if (auto it = tasks_.find(id); it != tasks_.end()) {
            out.push_back(it->second.current);
            continue;
        }
        const auto article = articles.get_article(c.article_id);
        auto t = make_task(c, article.newspaper.country, article.publication_date, gazetteer_);
        record({{"op", "enqueue"}, {"task", to_json(t)}});
        tasks_.emplace(id, Entry{t, t});
        out.push_back(std::move(t));
    }
    std::stable_sort(out.begin(), out.end(), fifo_before);
    return out;
}

std::vector<CurationTask> CurationQueue::next_tasks(const TaskFilter& filter, std::size_t limit) const {
    std::shared_lock lock(mutex_);
    std::vector<CurationTask> out;
    for (const auto& [id, e] : tasks_)
        if (filter.matches(e.current)) out.push_back(e.current);
    std::sort(out.begin(), out.end(), fifo_before);
    if (out.size() > limit) out.resize(limit);
    return out;
}

std::optional<CurationTask> CurationQueue::find(const std::string& task_id) const {
    std::shared_lock lock(mutex_);
    auto it = tasks_.find(task_id);
    if (it == tasks_.end()) return std::nullopt;
    return it->second.current;
}

CurationTask CurationQueue::get(const std::string& task_id) const {
    std::shared_lock lock(mutex_);
    return entry(task_id).current;
}

CurationTask CurationQueue::initial(const std::string& task_id) const {
    std::shared_lock lock(mutex_);
    return entry(task_id).initial;
}

std::size_t CurationQueue::size() const {
    std::shared_lock lock(mutex_);
    return tasks_.size();
}

CurationTask CurationQueue::apply(const std::string& task_id, AnalystAction action,
                                  std::optional<std::size_t> expected_version) {
    std::unique_lock lock(mutex_);
    auto it = tasks_.find(task_id);
    if (it == tasks_.end()) throw not_found("task " + task_id);
    auto& e = it->second;
    if (expected_version && *expected_version != e.current.version())
        throw Error(ErrorCode::VersionConflict, "task was modified; re-read and retry",
                    {task_id, std::to_string(e.current.version())});
    if (action.timestamp.empty()) action.timestamp = utc_timestamp();
    auto next = apply_action(e.current, action);
    record({{"op", "action"}, {"task", task_id}, {"action", to_json(action)}});
    e.current = std::move(next);
    return e.current;
}

events::ClimateEvent CurationQueue::promote(const std::string& task_id, events::EventStore& store,
                                            std::span<const query::DomainRule> rules) {
    std::unique_lock lock(mutex_);
    auto it = tasks_.find(task_id);
    if (it == tasks_.end()) throw not_found("task " + task_id);
    auto& entry = it->second;
    if (entry.current.status == TaskStatus::Confirmed && entry.current.event_id) return store.get(*entry.current.event_id);
    if (entry.current.status == TaskStatus::Rejected) throw Error(ErrorCode::Conflict, "task closed", {task_id, "rejected"});

    auto fresh = event_from_task(entry.current);
    std::optional<events::ClimateEvent> target;
    for (const auto& existing : store.all()) {
        if (same_event(existing, fresh)) {
            target = existing;
            break;
        }
    }
    if (target) {
        merge_into(*target, fresh);
    } else {
        fresh.id = store.next_id();
        target = std::move(fresh);
    }
    auto event = events::infer_attributes(std::move(*target), rules);
    store.put(event);
    record({{"op", "promote"}, {"task", task_id}, {"event_id", event.id}});
    entry.current = mark_promoted(std::move(entry.current), event.id);
    return event;
}

}  // namespace hemeroteca::curation
