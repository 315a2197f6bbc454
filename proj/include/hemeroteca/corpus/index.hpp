#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hemeroteca/corpus/article.hpp"

namespace hemeroteca::corpus {

struct Posting {
    std::string doc;
    std::vector<std::uint32_t> positions;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Positional inverted index over normalized word tokens. Each token is
/// posted under its normalized form and, when different, under its
/// accent-stripped shadow key at the same position.
class InvertedIndex {
public:
    const std::vector<Posting>* postings(const std::string& term) const;
    const std::map<std::string, std::vector<Posting>>& all_postings() const { return postings_; }

    std::uint32_t doc_length(const std::string& doc) const;
    const std::map<std::string, std::uint32_t>& doc_lengths() const { return doc_lengths_; }

    /// Day ordinal of the article's publication date, used for result ordering.
    long doc_date(const std::string& doc) const;

    bool empty() const { return doc_lengths_.empty(); }
    std::size_t term_count() const { return postings_.size(); }

    nlohmann::json to_json() const;
    static InvertedIndex from_json(const nlohmann::json& doc);

    friend bool operator==(const InvertedIndex&, const InvertedIndex&) = default;

private:
    friend InvertedIndex build_index(std::span<const Article>);
    friend InvertedIndex build_index_serial(std::span<const Article>);

    std::map<std::string, std::vector<Posting>> postings_;
    std::map<std::string, std::uint32_t> doc_lengths_;
    std::map<std::string, long> doc_dates_;
};

/// Tokenizes articles in parallel (OpenMP) and merges per-article postings.
InvertedIndex build_index(std::span<const Article> articles);

/// Single-threaded reference kept for equivalence tests and benchmarks.
InvertedIndex build_index_serial(std::span<const Article> articles);

}  // namespace hemeroteca::corpus
