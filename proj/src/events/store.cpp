#include "hemeroteca/events/store.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <mutex>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/common/fileio.hpp"

namespace hemeroteca::events {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kLogName = "events.log";
constexpr std::size_t kCompactionSlack = 64;

}  // namespace

EventStore::EventStore(fs::path directory) : dir_(std::move(directory)) {
    fs::create_directories(*dir_);
    load();
    if (log_records_ > 2 * events_.size() + kCompactionSlack) compact();
}

void EventStore::load() {
    std::size_t line_no = 0;
    for (const auto& line : read_lines(*dir_ / kLogName)) {
        ++line_no;
        try {
            const auto rec = json::parse(line);
            auto e = event_from_json(rec.at("event"));
            link_articles(e);
            events_.insert_or_assign(e.id, std::move(e));
            ++log_records_;
        } catch (const std::exception& ex) {
            throw Error(ErrorCode::Internal, "corrupt event log line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
}

void EventStore::append(const ClimateEvent& event) {
    ++log_records_;
    if (dir_) append_line(*dir_ / kLogName, json{{"op", "put"}, {"event", to_json(event)}}.dump());
}

void EventStore::put(const ClimateEvent& event) {
    validate(event);
    std::unique_lock lock(mutex_);
    append(event);
    link_articles(event);
    events_.insert_or_assign(event.id, event);
}

void EventStore::link_articles(const ClimateEvent& event) {
    if (auto old = events_.find(event.id); old != events_.end()) {
        for (const auto& a : old->second.articles) {
            auto [lo, hi] = by_article_.equal_range(a);
            for (auto it = lo; it != hi;) it = it->second == event.id ? by_article_.erase(it) : std::next(it);
        }
    }
    for (const auto& a : event.articles) by_article_.emplace(a, event.id);
}

std::optional<ClimateEvent> EventStore::find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = events_.find(id);
    if (it == events_.end()) return std::nullopt;
    return it->second;
}

ClimateEvent EventStore::get(const std::string& id) const {
    auto e = find(id);
    if (!e) throw not_found("event " + id);
    return *e;
}

std::vector<ClimateEvent> EventStore::all() const {
    std::shared_lock lock(mutex_);
    std::vector<ClimateEvent> out;
    out.reserve(events_.size());
    for (const auto& [id, e] : events_) out.push_back(e);
    return out;
}

std::vector<ClimateEvent> EventStore::for_article(const std::string& article_id) const {
    std::shared_lock lock(mutex_);
    std::vector<ClimateEvent> out;
    auto [lo, hi] = by_article_.equal_range(article_id);
    for (auto it = lo; it != hi; ++it) out.push_back(events_.at(it->second));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

std::size_t EventStore::size() const {
    std::shared_lock lock(mutex_);
    return events_.size();
}

std::string EventStore::next_id() const {
    std::shared_lock lock(mutex_);
    int max_seen = 0;
    for (const auto& [id, e] : events_) {
        if (!id.starts_with("ev-")) continue;
        int n = 0;
        auto [p, ec] = std::from_chars(id.data() + 3, id.data() + id.size(), n);
        if (ec == std::errc{} && p == id.data() + id.size()) max_seen = std::max(max_seen, n);
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "ev-%04d", max_seen + 1);
    return buf;
}

std::size_t EventStore::compact() {
    std::unique_lock lock(mutex_);
    const std::size_t dropped = log_records_ - events_.size();
    if (dir_) {
        std::string content;
        for (const auto& [id, e] : events_) content += json{{"op", "put"}, {"event", to_json(e)}}.dump() + "\n";
        write_atomically(*dir_ / kLogName, content);
    }
    log_records_ = events_.size();
    return dropped;
}

std::size_t EventStore::log_records() const {
    std::shared_lock lock(mutex_);
    return log_records_;
}

bool EventStore::article_satisfies(const std::string& article_id, const query::Constraint& constraint) const {
    std::shared_lock lock(mutex_);
    auto [lo, hi] = by_article_.equal_range(article_id);
    for (auto it = lo; it != hi; ++it)
        if (satisfies(events_.at(it->second), constraint)) return true;
    return false;
}

}  // namespace hemeroteca::events
