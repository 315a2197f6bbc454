#pragma once

#include <string_view>

#include "hemeroteca/query/expr.hpp"

namespace hemeroteca::query {

/// Parses a keyword query into a canonical QueryExpr.
///
/// Grammar: bare words, "quoted phrases", [constraints] and parentheses,
/// combined with AND/OR (Spanish Y/O accepted, any case). AND binds tighter
/// than OR and juxtaposition means AND. Throws ParseError carrying the byte
/// offset of the offending token; an unclosed parenthesis is reported at
/// the parenthesis itself.
QueryExpr parse_query(std::string_view text);

}  // namespace hemeroteca::query
