#include "hemeroteca/corpus/index.hpp"

#include <algorithm>
#include <numeric>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/text/tokenizer.hpp"

namespace hemeroteca::corpus {

namespace {

struct DocTerms {
    std::map<std::string, std::vector<std::uint32_t>> positions;
    std::uint32_t length = 0;
};

DocTerms index_document(const Article& article) {
    DocTerms out;
    std::uint32_t pos = 0;
    for (const auto& tok : text::scan_tokens(article.raw_text)) {
        if (tok.kind != text::TokenKind::Word) continue;
        auto norm = text::normalize(tok.surface);
        auto shadow = text::strip_accents(norm);
        if (shadow != norm) out.positions[shadow].push_back(pos);
        out.positions[std::move(norm)].push_back(pos);
        ++pos;
    }
    out.length = pos;
    return out;
}

std::vector<const Article*> sorted_by_id(std::span<const Article> articles) {
    std::vector<const Article*> order;
    order.reserve(articles.size());
    for (const auto& a : articles) order.push_back(&a);
    std::sort(order.begin(), order.end(), [](const Article* a, const Article* b) { return a->id < b->id; });
    return order;
}

}  // namespace

const std::vector<Posting>* InvertedIndex::postings(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
}

std::uint32_t InvertedIndex::doc_length(const std::string& doc) const {
    auto it = doc_lengths_.find(doc);
    return it == doc_lengths_.end() ? 0 : it->second;
}

long InvertedIndex::doc_date(const std::string& doc) const {
    auto it = doc_dates_.find(doc);
    return it == doc_dates_.end() ? 0 : it->second;
}

nlohmann::json InvertedIndex::to_json() const {
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [term, list] : postings_) {
        auto& arr = terms[term] = nlohmann::json::array();
        for (const auto& p : list) arr.push_back({p.doc, p.positions});
    }
    nlohmann::json docs = nlohmann::json::object();
    for (const auto& [doc, len] : doc_lengths_) docs[doc] = {len, doc_date(doc)};
    return {{"docs", docs}, {"postings", terms}};
}

InvertedIndex InvertedIndex::from_json(const nlohmann::json& doc) {
    InvertedIndex idx;
    try {
        for (const auto& [id, v] : doc.at("docs").items()) {
            idx.doc_lengths_[id] = v.at(0).get<std::uint32_t>();
            idx.doc_dates_[id] = v.at(1).get<long>();
        }
        for (const auto& [term, list] : doc.at("postings").items()) {
            auto& out = idx.postings_[term];
            for (const auto& p : list)
                out.push_back({p.at(0).get<std::string>(), p.at(1).get<std::vector<std::uint32_t>>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ValidationFailed, std::string("malformed index file: ") + e.what());
    }
    return idx;
}

InvertedIndex build_index(std::span<const Article> articles) {
    const auto order = sorted_by_id(articles);
    const auto n = static_cast<long>(order.size());
    std::vector<DocTerms> per_doc(order.size());

#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) per_doc[static_cast<std::size_t>(i)] = index_document(*order[static_cast<std::size_t>(i)]);

    // Documents are merged in id order, so every postings list comes out
    // sorted by id without a final sort.
    InvertedIndex idx;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& id = order[i]->id;
        idx.doc_lengths_[id] = per_doc[i].length;
        idx.doc_dates_[id] = order[i]->publication_date.first_day();
        for (auto& [term, positions] : per_doc[i].positions)
            idx.postings_[term].push_back({id, std::move(positions)});
    }
    return idx;
}

InvertedIndex build_index_serial(std::span<const Article> articles) {
    InvertedIndex idx;
    for (const auto& article : articles) {
        std::uint32_t pos = 0;
        for (const auto& word : text::normalized_words(article.raw_text)) {
            for (const auto& key : {word, text::strip_accents(word)}) {
                auto& list = idx.postings_[key];
                auto it = std::lower_bound(list.begin(), list.end(), article.id,
                                           [](const Posting& p, const std::string& id) { return p.doc < id; });
                if (it == list.end() || it->doc != article.id) it = list.insert(it, Posting{article.id, {}});
                if (it->positions.empty() || it->positions.back() != pos) it->positions.push_back(pos);
            }
            ++pos;
        }
        idx.doc_lengths_[article.id] = pos;
        idx.doc_dates_[article.id] = article.publication_date.first_day();
    }
    return idx;
}

}  // namespace hemeroteca::corpus
