#pragma once

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hemeroteca/common/partial_date.hpp"

namespace hemeroteca::corpus {

/// Country codes the corpus accepts. MX, CO, EC and UY are built in;
/// deployments may register more.
class CountryRegistry {
public:
    static CountryRegistry& instance();

    bool supported(const std::string& code) const;
    void register_extension(const std::string& code);
    std::set<std::string> codes() const;

private:
    CountryRegistry();
    std::set<std::string> codes_;
};

struct NewspaperMeta {
    std::string name;
    std::string country;
    std::string issue_label;
    int pages = 1;
    std::optional<PartialDate> window_start;
    std::optional<PartialDate> window_end;

    friend bool operator==(const NewspaperMeta&, const NewspaperMeta&) = default;
};

struct Article {
    std::string id;
    NewspaperMeta newspaper;
    PartialDate publication_date;
    std::string raw_text;
    std::optional<std::string> ocr_link;
    std::string source_library;

    friend bool operator==(const Article&, const Article&) = default;
};

/// Throws Error(ValidationFailed) with a human-readable reason.
void validate(const Article& article);

nlohmann::json to_json(const Article& article);
/// Parses a canonical record. Throws Error(ValidationFailed) on missing or
/// ill-typed fields; does not run validate().
Article article_from_json(const nlohmann::json& record, const std::string& source_library = {});

/// Per-library field renames onto the canonical record layout. Keys and
/// values are dotted paths ("periodico.nombre" -> "newspaper.name").
class MetadataMapping {
public:
    MetadataMapping() = default;
    MetadataMapping(std::string source_library, std::map<std::string, std::string> renames);

    /// {"source_library": "...", "fields": {"src.path": "canonical.path", ...}}
    static MetadataMapping from_json(const nlohmann::json& doc);
    static MetadataMapping load(const std::string& path);

    nlohmann::json apply(const nlohmann::json& record) const;
    const std::string& source_library() const { return source_library_; }

private:
    std::string source_library_;
    std::map<std::string, std::string> renames_;
};

struct Rejection {
    std::size_t line = 0;  // 1-based line number in the input
    std::string reason;
};

struct IngestReport {
    std::size_t accepted = 0;
    std::vector<Rejection> rejected;
};

/// Conjunctive article filter; unset fields match everything.
struct ArticleFilter {
    std::optional<std::string> country;
    std::optional<DateRange> date_range;
    std::optional<std::string> newspaper;

    /// A date range matches articles whose publication date intersects it.
    bool matches(const Article& article) const;
};

struct ArticleSummary {
    std::string id;
    std::string newspaper;
    std::string country;
    std::string date;
    std::string excerpt;
};

ArticleSummary summarize(const Article& article);
nlohmann::json to_json(const ArticleSummary& summary);

}  // namespace hemeroteca::corpus
