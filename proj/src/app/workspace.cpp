#include "hemeroteca/app/workspace.hpp"

#include <cstdlib>
#include <fstream>

#include "hemeroteca/common/error.hpp"

namespace hemeroteca::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void parse_listen(Config& config, std::string_view listen) {
    const auto colon = listen.rfind(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::ValidationFailed, "listen must be host:port");
    config.host = std::string(listen.substr(0, colon));
    try {
        config.port = std::stoi(std::string(listen.substr(colon + 1)));
    } catch (const std::exception&) {
        throw Error(ErrorCode::ValidationFailed, "bad port in listen address", {std::string(listen)});
    }
    if (config.port < 0 || config.port > 65535)
        throw Error(ErrorCode::ValidationFailed, "port out of range", {std::string(listen)});
}

template <class T, class F>
T load_if_present(const fs::path& path, F&& loader) {
    if (path.empty() || !fs::exists(path)) return T{};
    return loader(path.string());
}

}  // namespace

ResourcePaths ResourcePaths::in(const fs::path& dir) {
    return {dir / "lexicon.tsv",  dir / "gazetteer.tsv", dir / "persons.txt", dir / "organizations.txt",
            dir,                  dir / "stoplist.txt",  dir / "damages.txt", dir / "rules.jsonl"};
}

Config& Config::resolve() {
    const auto defaults = ResourcePaths::in(resources_dir);
    auto fill = [](fs::path& p, const fs::path& d) {
        if (p.empty()) p = d;
    };
    fill(resources.lexicon, defaults.lexicon);
    fill(resources.gazetteer, defaults.gazetteer);
    fill(resources.persons, defaults.persons);
    fill(resources.organizations, defaults.organizations);
    fill(resources.vocabulary, defaults.vocabulary);
    fill(resources.stoplist, defaults.stoplist);
    fill(resources.damages, defaults.damages);
    fill(resources.rules, defaults.rules);
    return *this;
}

Config config_from_json(const json& doc) {
    Config c;
    if (!doc.is_object()) throw Error(ErrorCode::ValidationFailed, "config must be an object");
    if (doc.contains("listen")) parse_listen(c, doc.at("listen").get<std::string>());
    if (doc.contains("data_dir") && !doc.at("data_dir").is_null()) c.data_dir = doc.at("data_dir").get<std::string>();
    if (doc.contains("resources_dir")) c.resources_dir = doc.at("resources_dir").get<std::string>();
    if (doc.contains("api_token") && !doc.at("api_token").is_null()) c.api_token = doc.at("api_token").get<std::string>();
    if (doc.contains("resources")) {
        const auto& r = doc.at("resources");
        auto take = [&](const char* key, fs::path& out) {
            if (r.contains(key)) out = r.at(key).get<std::string>();
        };
        take("lexicon", c.resources.lexicon);
        take("gazetteer", c.resources.gazetteer);
        take("persons", c.resources.persons);
        take("organizations", c.resources.organizations);
        take("vocabulary", c.resources.vocabulary);
        take("stoplist", c.resources.stoplist);
        take("damages", c.resources.damages);
        take("rules", c.resources.rules);
    }
    return c;
}

void apply_environment(Config& config) {
    if (const char* v = std::getenv("HEMEROTECA_LISTEN"); v && *v) parse_listen(config, v);
    if (const char* v = std::getenv("HEMEROTECA_DATA_DIR"); v && *v) config.data_dir = v;
    if (const char* v = std::getenv("HEMEROTECA_RESOURCES"); v && *v) config.resources_dir = v;
    if (const char* v = std::getenv("HEMEROTECA_API_TOKEN"); v && *v) config.api_token = v;
}

Config load_config(const std::optional<fs::path>& file) {
    Config c;
    if (file) {
        std::ifstream in(*file);
        if (!in) throw not_found("config file " + file->string());
        try {
            c = config_from_json(json::parse(in));
        } catch (const json::exception& ex) {
            throw Error(ErrorCode::ParseError, std::string("config: ") + ex.what());
        }
    }
    apply_environment(c);
    c.resolve();
    return c;
}

Workspace::Workspace(Config config) : config_(std::move(config)) {
    config_.resolve();
    const auto& r = config_.resources;
    gazetteer_ = geo::Gazetteer::load(r.gazetteer.string());
    lexicon_ = load_if_present<lingpipe::TagLexicon>(r.lexicon, lingpipe::TagLexicon::load);
    persons_ = load_if_present<lingpipe::NameList>(r.persons, lingpipe::NameList::load);
    organizations_ = load_if_present<lingpipe::NameList>(r.organizations, lingpipe::NameList::load);
    stoplist_ = load_if_present<vocab::Stoplist>(r.stoplist, vocab::Stoplist::load);
    damages_ = load_if_present<std::vector<std::string>>(r.damages, lingpipe::load_phrase_list);
    rules_ = load_if_present<std::vector<query::DomainRule>>(r.rules, query::load_rules);

    vocab_ = std::make_unique<vocab::Vocabulary>();
    vocab_->load_resources(r.vocabulary);
    query::validate_rules(rules_, *vocab_);

    if (config_.data_dir) {
        const auto& d = *config_.data_dir;
        fs::create_directories(d);
        vocab_->attach_journal(d / "vocabulary.journal");
        articles_ = std::make_unique<corpus::ArticleStore>(d / "corpus");
        events_ = std::make_unique<events::EventStore>(d / "events");
        curation_ = std::make_unique<curation::CurationQueue>(gazetteer_, d / "curation");
    } else {
        articles_ = std::make_unique<corpus::ArticleStore>();
        events_ = std::make_unique<events::EventStore>();
        curation_ = std::make_unique<curation::CurationQueue>(gazetteer_);
    }
}

lingpipe::PipelineResources Workspace::pipeline_resources() const {
    lingpipe::PipelineResources res;
    res.lexicon = &lexicon_;
    res.entities = {&gazetteer_, &persons_, &organizations_};
    res.vocabulary = vocab_.get();
    res.damage_terms = damages_;
    return res;
}

}  // namespace hemeroteca::app
