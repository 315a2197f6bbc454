#pragma once

#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hemeroteca/app/workspace.hpp"
#include "hemeroteca/corpus/article.hpp"
#include "hemeroteca/corpus/index.hpp"
#include "hemeroteca/events/analytics.hpp"
#include "hemeroteca/events/event.hpp"
#include "hemeroteca/query/expr.hpp"

namespace hemeroteca::testkit {

std::filesystem::path fixture(const std::string& name);
std::filesystem::path resources_dir();

/// Articles of tests/fixtures/corpus.jsonl, in file order.
std::vector<corpus::Article> fixture_articles();
/// Events of tests/fixtures/events40.jsonl.
std::vector<events::ClimateEvent> fixture_events();
/// Non-comment lines of a fixture text file.
std::vector<std::string> fixture_lines(const std::string& name);

/// In-memory workspace over the shipped resources.
app::Config memory_config();

/// Directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Small vocabulary with accented words so that exact and accent-free
/// postings both get exercised.
const std::vector<std::string>& random_words();

std::vector<corpus::Article> random_corpus(std::mt19937& rng, std::size_t max_docs);
/// Random tree of And/Or/Term nodes with at most `max_depth` levels.
query::QueryExpr random_query(std::mt19937& rng, int max_depth, const std::vector<std::string>& words);

/// Brute-force boolean semantics straight from the article texts.
std::set<std::string> oracle_matches(const query::QueryExpr& q, const std::vector<corpus::Article>& docs);
bool oracle_phrase(const std::vector<std::string>& phrase, const corpus::Article& doc);

/// Random conjunctive filter over the fields the 40-event fixture varies.
/// Always carries a bbox so that every matching single-point event lies on
/// the grid of a heatmap over that bbox.
events::EventFilter random_event_filter(std::mt19937& rng);
/// Linear scan written against the field semantics, ordered by time span
/// start then id.
std::vector<std::string> oracle_events(const std::vector<events::ClimateEvent>& all, const events::EventFilter& f);

}  // namespace hemeroteca::testkit
