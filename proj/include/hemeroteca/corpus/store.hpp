#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "hemeroteca/corpus/article.hpp"
#include "hemeroteca/corpus/index.hpp"

namespace hemeroteca::corpus {

/// Article store with its inverted index.
///
/// On disk a collection is one directory holding `articles/<id>.json` (one
/// record file per article) and `index.json`. Without a directory the store
/// lives in memory only. Reads share a lock; ingest and index rebuild take
/// it exclusively.
class ArticleStore {
public:
    ArticleStore() = default;
    explicit ArticleStore(std::filesystem::path directory);

    IngestReport ingest(std::istream& records, const MetadataMapping& mapping = {});

    /// Inserts or replaces one validated article without re-indexing.
    void put(const Article& article);

    Article get_article(const std::string& id) const;
    std::optional<Article> find(const std::string& id) const;
    std::vector<ArticleSummary> list_articles(const ArticleFilter& filter = {}) const;
    std::vector<Article> select(const ArticleFilter& filter = {}) const;
    std::size_t size() const;

    void rebuild_index();
    std::shared_ptr<const InvertedIndex> index() const;

private:
    void persist(const Article& article) const;
    void save_index() const;
    void load();

    std::optional<std::filesystem::path> dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, Article> articles_;
    std::shared_ptr<const InvertedIndex> index_ = std::make_shared<InvertedIndex>();
};

/// File-name-safe encoding of an article id (percent-escapes everything
/// outside [A-Za-z0-9._-]).
std::string encode_id(const std::string& id);

}  // namespace hemeroteca::corpus
