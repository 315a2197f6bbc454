#include "hemeroteca/corpus/store.hpp"

#include <cctype>
#include <fstream>
#include <mutex>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/common/fileio.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::corpus {

namespace fs = std::filesystem;
using nlohmann::json;

std::string encode_id(const std::string& id) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : id) {
        if (std::isalnum(c) || c == '.' || c == '_' || c == '-') {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 15]);
        }
    }
    // Keep "." and ".." from naming directories.
    if (out == "." || out == "..") out = "%2E" + out.substr(1);
    return out;
}

ArticleStore::ArticleStore(fs::path directory) : dir_(std::move(directory)) {
    fs::create_directories(*dir_ / "articles");
    load();
}

void ArticleStore::load() {
    for (const auto& entry : fs::directory_iterator(*dir_ / "articles")) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        try {
            auto a = article_from_json(json::parse(in));
            articles_.emplace(a.id, std::move(a));
        } catch (const std::exception& e) {
            throw Error(ErrorCode::Internal, "corrupt article file " + entry.path().string() + ": " + e.what());
        }
    }
    const auto index_file = *dir_ / "index.json";
    if (fs::exists(index_file)) {
        std::ifstream in(index_file);
        index_ = std::make_shared<InvertedIndex>(InvertedIndex::from_json(json::parse(in)));
        if (index_->doc_lengths().size() == articles_.size()) return;
    }
    std::vector<Article> all;
    for (const auto& [id, a] : articles_) all.push_back(a);
    index_ = std::make_shared<InvertedIndex>(build_index(all));
}

IngestReport ArticleStore::ingest(std::istream& records, const MetadataMapping& mapping) {
    IngestReport report;
    std::unique_lock lock(mutex_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(records, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            json raw;
            try {
                raw = json::parse(line);
            } catch (const json::parse_error& e) {
                throw Error(ErrorCode::ValidationFailed, std::string("malformed record: ") + e.what());
            }
            Article a = article_from_json(mapping.apply(raw), mapping.source_library());
            validate(a);
            if (auto it = articles_.find(a.id); it != articles_.end() && !(it->second == a))
                throw Error(ErrorCode::Conflict, "conflict");
            persist(a);
            articles_.insert_or_assign(a.id, std::move(a));
            ++report.accepted;
        } catch (const Error& e) {
            report.rejected.push_back({line_no, e.what()});
        }
    }
    std::vector<Article> all;
    all.reserve(articles_.size());
    for (const auto& [id, a] : articles_) all.push_back(a);
    index_ = std::make_shared<InvertedIndex>(build_index(all));
    save_index();
    return report;
}

void ArticleStore::put(const Article& article) {
    validate(article);
    std::unique_lock lock(mutex_);
    persist(article);
    articles_.insert_or_assign(article.id, article);
}

Article ArticleStore::get_article(const std::string& id) const {
    auto a = find(id);
    if (!a) throw not_found("article " + id);
    return *a;
}

std::optional<Article> ArticleStore::find(const std::string& id) const {
    std::shared_lock lock(mutex_);
    auto it = articles_.find(id);
    if (it == articles_.end()) return std::nullopt;
    return it->second;
}

std::vector<ArticleSummary> ArticleStore::list_articles(const ArticleFilter& filter) const {
    std::vector<ArticleSummary> out;
    std::shared_lock lock(mutex_);
    for (const auto& [id, a] : articles_)
        if (filter.matches(a)) out.push_back(summarize(a));
    return out;
}

std::vector<Article> ArticleStore::select(const ArticleFilter& filter) const {
    std::vector<Article> out;
    std::shared_lock lock(mutex_);
    for (const auto& [id, a] : articles_)
        if (filter.matches(a)) out.push_back(a);
    return out;
}

std::size_t ArticleStore::size() const {
    std::shared_lock lock(mutex_);
    return articles_.size();
}

void ArticleStore::rebuild_index() {
    std::unique_lock lock(mutex_);
    std::vector<Article> all;
    all.reserve(articles_.size());
    for (const auto& [id, a] : articles_) all.push_back(a);
    index_ = std::make_shared<InvertedIndex>(build_index(all));
    save_index();
}

std::shared_ptr<const InvertedIndex> ArticleStore::index() const {
    std::shared_lock lock(mutex_);
    return index_;
}

void ArticleStore::persist(const Article& article) const {
    if (!dir_) return;
    write_atomically(*dir_ / "articles" / (encode_id(article.id) + ".json"), to_json(article).dump(2));
}

void ArticleStore::save_index() const {
    if (!dir_) return;
    write_atomically(*dir_ / "index.json", index_->to_json().dump());
}

}  // namespace hemeroteca::corpus
