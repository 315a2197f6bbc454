#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hemeroteca/corpus/article.hpp"

namespace hemeroteca::vocab {

/// Spanish function words kept out of the exploration surfaces. Never
/// applied to the inverted index.
class Stoplist {
public:
    Stoplist() = default;
    explicit Stoplist(std::set<std::string> words);
    static Stoplist load(const std::string& path);
    static Stoplist parse(std::istream& in);

    bool contains(const std::string& normalized) const { return words_.contains(normalized); }
    std::size_t size() const { return words_.size(); }

private:
    std::set<std::string> words_;
};

/// Dense docs x terms count matrix. Docs are ordered by id, terms
/// lexicographically; counts are stored row-major.
struct TermFrequencyMatrix {
    std::vector<std::string> docs;
    std::vector<std::string> terms;
    std::vector<std::uint32_t> counts;
    std::vector<std::uint32_t> doc_lengths;  // all word tokens, stopwords included

    std::uint32_t at(std::size_t doc, std::size_t term) const { return counts[doc * terms.size() + term]; }
    std::uint64_t column_total(std::size_t term) const;
    bool empty() const { return docs.empty(); }

    friend bool operator==(const TermFrequencyMatrix&, const TermFrequencyMatrix&) = default;
};

/// Counts in parallel (OpenMP) over documents.
TermFrequencyMatrix build_tf_matrix(std::span<const corpus::Article> articles, const Stoplist* stoplist = nullptr);
/// Single-threaded reference.
TermFrequencyMatrix build_tf_matrix_serial(std::span<const corpus::Article> articles,
                                           const Stoplist* stoplist = nullptr);

/// Highest column totals, ties broken lexicographically.
std::vector<std::pair<std::string, std::uint64_t>> top_terms(const TermFrequencyMatrix& m, std::size_t k);

/// Row-normalized grid (count / doc length) for heat-map rendering.
std::vector<double> normalized_rows(const TermFrequencyMatrix& m);

/// Delimited grid: header row "doc" + terms, then one row per doc.
void write_tf_grid(std::ostream& out, const TermFrequencyMatrix& m, bool normalized = false, char delimiter = '\t');

}  // namespace hemeroteca::vocab
