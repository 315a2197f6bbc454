#include "hemeroteca/vocab/term_frequency.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <unordered_map>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/text/tokenizer.hpp"

namespace hemeroteca::vocab {

Stoplist::Stoplist(std::set<std::string> words) {
    for (const auto& w : words) words_.insert(text::normalize(w));
}

Stoplist Stoplist::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw not_found("stoplist file " + path);
    return parse(in);
}

Stoplist Stoplist::parse(std::istream& in) {
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto w = text::trim(line);
        if (!w.empty() && w[0] != '#') words.insert(w);
    }
    return Stoplist(std::move(words));
}

std::uint64_t TermFrequencyMatrix::column_total(std::size_t term) const {
    std::uint64_t total = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) total += at(d, term);
    return total;
}

namespace {

struct DocCounts {
    std::unordered_map<std::string, std::uint32_t> counts;
    std::uint32_t length = 0;
};

DocCounts count_document(const corpus::Article& a, const Stoplist* stoplist) {
    DocCounts out;
    for (auto& w : text::normalized_words(a.raw_text)) {
        ++out.length;
        if (stoplist && stoplist->contains(w)) continue;
        ++out.counts[std::move(w)];
    }
    return out;
}

std::vector<const corpus::Article*> by_id(std::span<const corpus::Article> articles) {
    std::vector<const corpus::Article*> order;
    for (const auto& a : articles) order.push_back(&a);
    std::sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->id < b->id; });
    return order;
}

}  // namespace

TermFrequencyMatrix build_tf_matrix(std::span<const corpus::Article> articles, const Stoplist* stoplist) {
    const auto order = by_id(articles);
    const auto n = static_cast<long>(order.size());
    std::vector<DocCounts> rows(order.size());

#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = count_document(*order[static_cast<std::size_t>(i)], stoplist);

    std::set<std::string> vocab;
    for (const auto& r : rows)
        for (const auto& [t, c] : r.counts) vocab.insert(t);

    TermFrequencyMatrix m;
    m.terms.assign(vocab.begin(), vocab.end());
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t j = 0; j < m.terms.size(); ++j) column.emplace(m.terms[j], j);
    m.docs.reserve(order.size());
    for (const auto* a : order) m.docs.push_back(a->id);
    m.doc_lengths.resize(order.size());
    m.counts.assign(order.size() * m.terms.size(), 0);

#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
        const auto row = static_cast<std::size_t>(i);
        m.doc_lengths[row] = rows[row].length;
        for (const auto& [t, c] : rows[row].counts) m.counts[row * m.terms.size() + column.at(t)] = c;
    }
    return m;
}

TermFrequencyMatrix build_tf_matrix_serial(std::span<const corpus::Article> articles, const Stoplist* stoplist) {
    std::map<std::string, std::map<std::string, std::uint32_t>> per_doc;
    std::map<std::string, std::uint32_t> lengths;
    std::set<std::string> vocab;
    for (const auto& a : articles) {
        auto& row = per_doc[a.id];
        for (const auto& w : text::normalized_words(a.raw_text)) {
            ++lengths[a.id];
            if (stoplist && stoplist->contains(w)) continue;
            ++row[w];
            vocab.insert(w);
        }
        lengths.try_emplace(a.id, 0);
    }
    TermFrequencyMatrix m;
    m.terms.assign(vocab.begin(), vocab.end());
    for (const auto& [doc, row] : per_doc) {
        m.docs.push_back(doc);
        m.doc_lengths.push_back(lengths[doc]);
        for (const auto& t : m.terms) {
            auto it = row.find(t);
            m.counts.push_back(it == row.end() ? 0 : it->second);
        }
    }
    return m;
}

std::vector<std::pair<std::string, std::uint64_t>> top_terms(const TermFrequencyMatrix& m, std::size_t k) {
    std::vector<std::pair<std::string, std::uint64_t>> totals;
    totals.reserve(m.terms.size());
    for (std::size_t j = 0; j < m.terms.size(); ++j) totals.emplace_back(m.terms[j], m.column_total(j));
    std::sort(totals.begin(), totals.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (totals.size() > k) totals.resize(k);
    return totals;
}

std::vector<double> normalized_rows(const TermFrequencyMatrix& m) {
    std::vector<double> out(m.counts.size(), 0.0);
    for (std::size_t d = 0; d < m.docs.size(); ++d) {
        if (m.doc_lengths[d] == 0) continue;
        for (std::size_t t = 0; t < m.terms.size(); ++t)
            out[d * m.terms.size() + t] = static_cast<double>(m.at(d, t)) / m.doc_lengths[d];
    }
    return out;
}

void write_tf_grid(std::ostream& out, const TermFrequencyMatrix& m, bool normalized, char delimiter) {
    out << "doc";
    for (const auto& t : m.terms) out << delimiter << t;
    out << '\n';
    const auto grid = normalized ? normalized_rows(m) : std::vector<double>{};
    for (std::size_t d = 0; d < m.docs.size(); ++d) {
        out << m.docs[d];
        for (std::size_t t = 0; t < m.terms.size(); ++t) {
            out << delimiter;
            if (normalized)
                out << std::setprecision(6) << grid[d * m.terms.size() + t];
            else
                out << m.at(d, t);
        }
        out << '\n';
    }
}

}  // namespace hemeroteca::vocab
