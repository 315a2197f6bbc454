#pragma once

#include <set>
#include <string>
#include <vector>

#include "hemeroteca/corpus/index.hpp"
#include "hemeroteca/query/expr.hpp"

namespace hemeroteca::query {

/// Answers constraint leaves from curated event attributes. An article
/// satisfies a constraint when some event linked to it does.
class EventAttributeSource {
public:
    virtual ~EventAttributeSource() = default;
    virtual bool article_satisfies(const std::string& article_id, const Constraint& constraint) const = 0;
};

struct ScoredDoc {
    std::string doc;
    int score = 0;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// Documents where the phrase occurs as consecutive indexed tokens.
std::set<std::string> phrase_matches(const std::vector<std::string>& phrase, const corpus::InvertedIndex& index);

/// Boolean result set: Term = phrase match, And = intersection, Or = union.
/// Throws Error(ValidationFailed, "constraints need event history") when the
/// query has constraint leaves and `events` is null.
std::set<std::string> matching_docs(const QueryExpr& q, const corpus::InvertedIndex& index,
                                    const EventAttributeSource* events = nullptr);

/// Ranked results. Score is the number of distinct Term leaves matching the
/// document; ties go to the earlier publication date, then to the lower id.
std::vector<ScoredDoc> evaluate(const QueryExpr& q, const corpus::InvertedIndex& index,
                                const EventAttributeSource* events = nullptr);

}  // namespace hemeroteca::query
