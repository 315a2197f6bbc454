#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "hemeroteca/events/event.hpp"
#include "hemeroteca/query/evaluate.hpp"

namespace hemeroteca::events {

/// The event history. On disk it is an append log (`events.log`, one JSON
/// record per line) that compact() rewrites as one record per live event,
/// sorted by id. Opening a log whose superseded records outnumber the live
/// ones compacts it. Reads share a lock; writes are exclusive.
class EventStore : public query::EventAttributeSource {
public:
    EventStore() = default;
    explicit EventStore(std::filesystem::path directory);

    /// Validates and inserts or replaces the event.
    void put(const ClimateEvent& event);
    std::optional<ClimateEvent> find(const std::string& id) const;
    ClimateEvent get(const std::string& id) const;
    /// All events sorted by id.
    std::vector<ClimateEvent> all() const;
    std::vector<ClimateEvent> for_article(const std::string& article_id) const;
    std::size_t size() const;
    /// Next free id of the form "ev-0001".
    std::string next_id() const;
    /// Rewrites the log with the current state; returns the number of
    /// superseded records dropped.
    std::size_t compact();
    std::size_t log_records() const;

    bool article_satisfies(const std::string& article_id, const query::Constraint& constraint) const override;

private:
    void load();
    void append(const ClimateEvent& event);
    /// Moves the article links of a previous version of the event to this one.
    void link_articles(const ClimateEvent& event);

    std::optional<std::filesystem::path> dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, ClimateEvent> events_;
    std::multimap<std::string, std::string> by_article_;
    std::size_t log_records_ = 0;
};

}  // namespace hemeroteca::events
