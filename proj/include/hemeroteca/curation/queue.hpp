#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "hemeroteca/corpus/store.hpp"
#include "hemeroteca/curation/task.hpp"
#include "hemeroteca/events/store.hpp"
#include "hemeroteca/query/rules.hpp"

namespace hemeroteca::curation {

struct TaskFilter {
    /// Unset means open tasks (pending or in review).
    std::optional<TaskStatus> status;
    std::optional<std::string> country;
    std::optional<std::string> article_id;

    bool matches(const CurationTask& t) const;
};

/// Merge radius for promoting a task into an existing event.
inline constexpr double kMergeRadiusKm = 50.0;

/// Same name (or both unnamed), intersecting time spans and some pair of
/// scope points within 50 km.
bool same_event(const events::ClimateEvent& a, const events::ClimateEvent& b);

/// Event a confirmed task describes (no id, no inferred attributes).
/// Throws Error(ValidationFailed) naming the missing slots.
events::ClimateEvent event_from_task(const CurationTask& task);

/// The analyst work queue. Persisted as an append-only `tasks.log` (JSON
/// lines: enqueue, action and promote records) that is replayed on load.
/// Reads share a lock, mutations are exclusive; stale versions are
/// rejected with Error(VersionConflict).
class CurationQueue {
public:
    explicit CurationQueue(const geo::Gazetteer& gazetteer, std::optional<std::filesystem::path> directory = {});

    /// Idempotent per article: an existing task is returned unchanged.
    std::vector<CurationTask> enqueue(std::span<const lingpipe::EventCandidate> candidates,
                                      const corpus::ArticleStore& articles);

    /// FIFO by article date, then task id.
    std::vector<CurationTask> next_tasks(const TaskFilter& filter = {}, std::size_t limit = 50) const;
    std::optional<CurationTask> find(const std::string& task_id) const;
    CurationTask get(const std::string& task_id) const;
    std::size_t size() const;

    /// Stamps a missing timestamp, checks `expected_version` when given and
    /// appends the action to the log.
    CurationTask apply(const std::string& task_id, AnalystAction action,
                       std::optional<std::size_t> expected_version = std::nullopt);

    /// Creates or merges the event in `events` and confirms the task.
    /// Promoting a confirmed task again returns its event unchanged.
    events::ClimateEvent promote(const std::string& task_id, events::EventStore& events,
                                 std::span<const query::DomainRule> rules = {});

    /// Initial state as enqueued, before any action.
    CurationTask initial(const std::string& task_id) const;

private:
    struct Entry {
        CurationTask initial;
        CurationTask current;
    };
    void load();
    void record(const nlohmann::json& rec);
    const Entry& entry(const std::string& task_id) const;

    const geo::Gazetteer& gazetteer_;
    std::optional<std::filesystem::path> dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, Entry> tasks_;
};

/// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_timestamp();

}  // namespace hemeroteca::curation
