#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hemeroteca/corpus/store.hpp"
#include "hemeroteca/curation/queue.hpp"
#include "hemeroteca/events/store.hpp"
#include "hemeroteca/geo/gazetteer.hpp"
#include "hemeroteca/lingpipe/pipeline.hpp"
#include "hemeroteca/lingpipe/tagger.hpp"
#include "hemeroteca/query/rules.hpp"
#include "hemeroteca/vocab/term_frequency.hpp"
#include "hemeroteca/vocab/vocabulary.hpp"

namespace hemeroteca::app {

/// Resource files. Unset paths default to the conventional names inside
/// `resources_dir`; a missing optional file loads as empty.
struct ResourcePaths {
    std::filesystem::path lexicon;        // lexicon.tsv
    std::filesystem::path gazetteer;      // gazetteer.tsv
    std::filesystem::path persons;        // persons.txt
    std::filesystem::path organizations;  // organizations.txt
    std::filesystem::path vocabulary;     // directory with thesaurus.tsv and folksonomy/
    std::filesystem::path stoplist;       // stoplist.txt
    std::filesystem::path damages;        // damages.txt
    std::filesystem::path rules;          // rules.jsonl

    static ResourcePaths in(const std::filesystem::path& resources_dir);
};

struct Config {
    std::string host = "127.0.0.1";
    int port = 8080;
    /// Empty keeps every store in memory.
    std::optional<std::filesystem::path> data_dir;
    std::filesystem::path resources_dir = "resources";
    ResourcePaths resources;
    /// When set, requests must carry it in the X-Api-Token header.
    std::optional<std::string> api_token;

    /// Fills unset resource paths from `resources_dir`.
    Config& resolve();
};

/// Reads a config document:
///   {"listen": "host:port", "data_dir": ..., "resources_dir": ...,
///    "resources": {"lexicon": ..., ...}, "api_token": ...}
/// then applies HEMEROTECA_LISTEN, HEMEROTECA_DATA_DIR,
/// HEMEROTECA_RESOURCES and HEMEROTECA_API_TOKEN from the environment.
Config load_config(const std::optional<std::filesystem::path>& file);
Config config_from_json(const nlohmann::json& doc);
void apply_environment(Config& config);

/// Every store and resource one deployment works with.
class Workspace {
public:
    explicit Workspace(Config config);
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    const Config& config() const { return config_; }
    lingpipe::PipelineResources pipeline_resources() const;

    corpus::ArticleStore& articles() { return *articles_; }
    vocab::Vocabulary& vocabulary() { return *vocab_; }
    events::EventStore& events() { return *events_; }
    curation::CurationQueue& curation() { return *curation_; }
    const geo::Gazetteer& gazetteer() const { return gazetteer_; }
    const vocab::Stoplist& stoplist() const { return stoplist_; }
    const std::vector<query::DomainRule>& rules() const { return rules_; }

private:
    Config config_;
    geo::Gazetteer gazetteer_;
    lingpipe::TagLexicon lexicon_;
    lingpipe::NameList persons_;
    lingpipe::NameList organizations_;
    vocab::Stoplist stoplist_;
    std::vector<std::string> damages_;
    std::vector<query::DomainRule> rules_;
    std::unique_ptr<vocab::Vocabulary> vocab_;
    std::unique_ptr<corpus::ArticleStore> articles_;
    std::unique_ptr<events::EventStore> events_;
    std::unique_ptr<curation::CurationQueue> curation_;
};

}  // namespace hemeroteca::app
