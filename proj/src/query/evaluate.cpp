#include "hemeroteca/query/evaluate.hpp"

#include <algorithm>
#include <iterator>
#include <map>

#include "hemeroteca/common/error.hpp"

namespace hemeroteca::query {

namespace {

using DocSet = std::set<std::string>;

bool has_position(const std::vector<std::uint32_t>& positions, std::uint32_t p) {
    return std::binary_search(positions.begin(), positions.end(), p);
}

class Evaluator {
public:
    Evaluator(const corpus::InvertedIndex& index, const EventAttributeSource* events)
        : index_(index), events_(events) {}

    DocSet run(const QueryExpr& q) {
        switch (q.kind) {
            case QueryExpr::Kind::Term: return term(q.phrase);
            case QueryExpr::Kind::Constraint: return constraint(*q.constraint);
            case QueryExpr::Kind::And: {
                DocSet acc = run(q.children.front());
                for (std::size_t i = 1; i < q.children.size() && !acc.empty(); ++i) {
                    const DocSet next = run(q.children[i]);
                    DocSet out;
                    std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(),
                                          std::inserter(out, out.end()));
                    acc = std::move(out);
                }
                return acc;
            }
            case QueryExpr::Kind::Or: {
                DocSet acc;
                for (const auto& c : q.children) acc.merge(run(c));
                return acc;
            }
        }
        return {};
    }

    const DocSet& term(const std::vector<std::string>& phrase) {
        auto it = cache_.find(phrase);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(phrase, phrase_matches(phrase, index_)).first->second;
    }

private:
    DocSet constraint(const Constraint& c) {
        if (!events_) throw Error(ErrorCode::ValidationFailed, "constraints need event history");
        DocSet out;
        for (const auto& [doc, len] : index_.doc_lengths())
            if (events_->article_satisfies(doc, c)) out.insert(doc);
        return out;
    }

    const corpus::InvertedIndex& index_;
    const EventAttributeSource* events_;
    std::map<std::vector<std::string>, DocSet> cache_;
};

}  // namespace

std::set<std::string> phrase_matches(const std::vector<std::string>& phrase, const corpus::InvertedIndex& index) {
    DocSet out;
    if (phrase.empty()) return out;
    std::vector<const std::vector<corpus::Posting>*> lists;
    for (const auto& w : phrase) {
        const auto* p = index.postings(w);
        if (!p) return out;
        lists.push_back(p);
    }
    for (const auto& first : *lists.front()) {
        std::vector<const std::vector<std::uint32_t>*> rest;
        for (std::size_t i = 1; i < lists.size(); ++i) {
            auto it = std::lower_bound(lists[i]->begin(), lists[i]->end(), first.doc,
                                       [](const corpus::Posting& p, const std::string& d) { return p.doc < d; });
            if (it == lists[i]->end() || it->doc != first.doc) break;
            rest.push_back(&it->positions);
        }
        if (rest.size() + 1 != lists.size()) continue;
        for (const auto start : first.positions) {
            bool ok = true;
            for (std::size_t i = 0; i < rest.size() && ok; ++i)
                ok = has_position(*rest[i], start + static_cast<std::uint32_t>(i + 1));
            if (ok) {
                out.insert(first.doc);
                break;
            }
        }
    }
    return out;
}

std::set<std::string> matching_docs(const QueryExpr& q, const corpus::InvertedIndex& index,
                                    const EventAttributeSource* events) {
    if (!events && has_constraints(q)) throw Error(ErrorCode::ValidationFailed, "constraints need event history");
    return Evaluator(index, events).run(q);
}

std::vector<ScoredDoc> evaluate(const QueryExpr& q, const corpus::InvertedIndex& index,
                                const EventAttributeSource* events) {
    if (!events && has_constraints(q)) throw Error(ErrorCode::ValidationFailed, "constraints need event history");
    Evaluator ev(index, events);
    const DocSet hits = ev.run(q);
    std::vector<ScoredDoc> out;
    out.reserve(hits.size());
    const auto leaves = term_leaves(q);
    for (const auto& doc : hits) {
        int score = 0;
        for (const auto& leaf : leaves) score += ev.term(leaf).contains(doc) ? 1 : 0;
        out.push_back({doc, score});
    }
    std::sort(out.begin(), out.end(), [&](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        const auto da = index.doc_date(a.doc);
        const auto db = index.doc_date(b.doc);
        if (da != db) return da < db;
        return a.doc < b.doc;
    });
    return out;
}

}  // namespace hemeroteca::query
