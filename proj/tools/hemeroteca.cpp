#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "hemeroteca/app/workspace.hpp"
#include "hemeroteca/service/api.hpp"
#include "hemeroteca/service/params.hpp"
#include "hemeroteca/vocab/term_frequency.hpp"

namespace {

using nlohmann::json;
using namespace hemeroteca;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw not_found("file " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json parse_json_arg(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, std::string(what) + " is not JSON: " + e.what());
    }
}

struct Filters {
    std::string country, date, from, to, newspaper, bbox, name, damage, status, article_id;
    std::optional<double> lat, lon, radius_km;

    void add_article_options(CLI::App* cmd) {
        cmd->add_option("--country", country, "ISO country code");
        cmd->add_option("--date", date, "Date expression, e.g. 1800-1810");
        cmd->add_option("--from", from, "Start date (YYYY[-MM[-DD]])");
        cmd->add_option("--to", to, "End date (YYYY[-MM[-DD]])");
        cmd->add_option("--newspaper", newspaper, "Newspaper name");
    }
    void add_event_options(CLI::App* cmd) {
        cmd->add_option("--country", country, "ISO country code");
        cmd->add_option("--date", date, "Date expression, e.g. 1890-1900");
        cmd->add_option("--from", from, "Start date");
        cmd->add_option("--to", to, "End date");
        cmd->add_option("--bbox", bbox, "min_lat,min_lon,max_lat,max_lon");
        cmd->add_option("--lat", lat, "Center latitude");
        cmd->add_option("--lon", lon, "Center longitude");
        cmd->add_option("--radius-km", radius_km, "Radius around the center");
        cmd->add_option("--name", name, "Event name");
        cmd->add_option("--damage", damage, "Damage term");
    }

    service::Params params() const {
        service::Params p;
        auto put = [&](const char* k, const std::string& v) {
            if (!v.empty()) p[k] = v;
        };
        auto put_num = [&](const char* k, const std::optional<double>& v) {
            if (v) p[k] = std::to_string(*v);
        };
        put("country", country);
        put("date", date);
        put("from", from);
        put("to", to);
        put("newspaper", newspaper);
        put("bbox", bbox);
        put("name", name);
        put("damage", damage);
        put("status", status);
        put("article_id", article_id);
        put_num("lat", lat);
        put_num("lon", lon);
        put_num("radius_km", radius_km);
        return p;
    }
};

/// Runs one request through the same route table the server uses and
/// returns the unwrapped data, raising the enveloped error otherwise.
json call(const service::Api& api, const std::string& method, const std::string& path,
          service::Params params = {}, json body = nullptr) {
    const auto token = std::getenv("HEMEROTECA_API_TOKEN");
    service::Request r{method, path, std::move(params), std::move(body),
                       token ? std::optional<std::string>(token) : std::nullopt};
    const auto res = api.handle(r);
    if (res.body.at("status") == "ok") return res.body.at("data");
    const auto& err = res.body.at("error");
    std::cerr << "error [" << err.at("code").get<std::string>() << "]: " << err.at("message").get<std::string>() << '\n';
    if (!err.at("details").empty()) std::cerr << "  details: " << err.at("details").dump() << '\n';
    throw CLI::RuntimeError(1);
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

service::Server* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Historical newspaper curation engine"};
    app.require_subcommand(1);

    std::optional<std::string> config_file, data_dir, resources_dir;
    app.add_option("--config", config_file, "JSON config file");
    app.add_option("--data-dir", data_dir, "Data directory (stores)");
    app.add_option("--resources", resources_dir, "Resource directory");

    std::unique_ptr<app::Workspace> workspace;
    std::unique_ptr<service::Api> api;
    auto open = [&]() -> const service::Api& {
        auto config = app::load_config(config_file);
        if (data_dir) config.data_dir = *data_dir;
        if (resources_dir) {
            config.resources_dir = *resources_dir;
            config.resources = {};
        }
        config.resolve();
        if (!config.data_dir) config.data_dir = "data";
        workspace = std::make_unique<app::Workspace>(std::move(config));
        api = std::make_unique<service::Api>(*workspace);
        return *api;
    };

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Ingest article records (JSON lines)");
    std::string input, mapping;
    ingest->add_option("--input", input, "Corpus file")->required();
    ingest->add_option("--mapping", mapping, "Metadata mapping file");
    ingest->callback([&] {
        json body{{"jsonl", read_file(input)}};
        if (!mapping.empty()) body["mapping"] = parse_json_arg(read_file(mapping), "mapping");
        print(call(open(), "POST", "/articles:ingest", {}, body));
    });

    // index
    auto* index = app.add_subcommand("index", "Maintain the inverted index");
    bool rebuild = false;
    index->add_flag("--rebuild", rebuild, "Rebuild from the stored articles")->required();
    index->callback([&] {
        open();
        workspace->articles().rebuild_index();
        const auto idx = workspace->articles().index();
        print({{"articles", idx->doc_lengths().size()}, {"terms", idx->term_count()}});
    });

    // pipeline
    auto* pipeline = app.add_subcommand("pipeline", "Linguistic pipeline");
    pipeline->require_subcommand(1);
    auto* run = pipeline->add_subcommand("run", "Build content trees and enqueue event candidates");
    Filters pf;
    pf.add_article_options(run);
    std::vector<std::string> ids;
    bool no_enqueue = false;
    run->add_option("--id", ids, "Article ids (repeatable)");
    run->add_flag("--no-enqueue", no_enqueue, "Do not create curation tasks");
    run->callback([&] {
        json body = ids.empty() ? json(pf.params()) : json{{"ids", ids}};
        body["enqueue"] = !no_enqueue;
        print(call(open(), "POST", "/pipeline/run", {}, body));
    });

    // vocab
    auto* vocab = app.add_subcommand("vocab", "Folksonomies and thesaurus");
    vocab->require_subcommand(1);
    std::string term, country, reg = "colloquial", to_term, kind;
    auto* add = vocab->add_subcommand("add", "Add a term to a country folksonomy");
    add->add_option("term", term)->required();
    add->add_option("--country", country)->required();
    add->add_option("--register", reg, "colloquial or scientific");
    add->callback([&] {
        print(call(open(), "POST", "/vocab/terms", {}, {{"term", term}, {"country", country}, {"register", reg}}));
    });
    auto* link = vocab->add_subcommand("link", "Relate two terms");
    link->add_option("from", term)->required();
    link->add_option("to", to_term)->required();
    link->add_option("--kind", kind, "synonym, hypernym, cultural_equivalent, scientific_equivalent")->required();
    link->add_option("--country", country);
    link->callback([&] {
        json body{{"from", term}, {"to", to_term}, {"kind", kind}};
        if (!country.empty()) body["country"] = country;
        print(call(open(), "POST", "/vocab/links", {}, body));
    });
    auto* expand = vocab->add_subcommand("expand", "Show synonyms, hypernyms and hyponyms");
    std::size_t depth = 1;
    expand->add_option("term", term)->required();
    expand->add_option("--depth", depth);
    expand->callback([&] {
        print(call(open(), "GET", "/vocab/expand", {{"term", term}, {"depth", std::to_string(depth)}}));
    });
    auto* tf = vocab->add_subcommand("tf", "Term frequency matrix");
    Filters tff;
    tff.add_article_options(tf);
    std::size_t max_terms = 50;
    std::string grid_out;
    bool normalized = false;
    tf->add_option("--terms", max_terms, "Columns to keep (most frequent)");
    tf->add_option("--grid", grid_out, "Write the full grid as TSV to this file");
    tf->add_flag("--normalized", normalized, "Row-normalize the TSV grid");
    tf->callback([&] {
        auto p = tff.params();
        p["terms"] = std::to_string(max_terms);
        const auto data = call(open(), "GET", "/vocab/tf", p);
        if (!grid_out.empty()) {
            const auto articles = workspace->articles().select(service::article_filter_from(tff.params()));
            std::ofstream out(grid_out);
            vocab::write_tf_grid(out, vocab::build_tf_matrix(articles, &workspace->stoplist()), normalized);
        }
        print({{"docs", data.at("docs").size()}, {"vocabulary_size", data.at("vocabulary_size")}, {"top", data.at("top")}});
    });

    // query
    auto* query = app.add_subcommand("query", "Keyword queries and rewrites");
    query->require_subcommand(1);
    auto* qrun = query->add_subcommand("run", "Rewrite and evaluate a query");
    std::string q, geo;
    std::vector<std::string> localize;
    bool extend = false, paper_literal = false, rules = false, preview = false;
    std::size_t limit = 50;
    qrun->add_option("q", q, "Query text")->required();
    qrun->add_flag("--extend", extend, "Thesaurus extension");
    qrun->add_flag("--paper-literal", paper_literal, "Conjunctive hypernym extension");
    qrun->add_option("--localize", localize, "Country code(s), '*' for all");
    qrun->add_flag("--rules", rules, "Domain-rule variants");
    qrun->add_option("--geo", geo, "Geo context '<place>, <radius km>'");
    qrun->add_flag("--preview", preview, "Only show the rewrite plan");
    qrun->add_option("--limit", limit, "Results per variant");
    qrun->callback([&] {
        json body{{"q", q}, {"extend", extend}, {"paper_literal", paper_literal}, {"rules", rules},
                  {"run", !preview}, {"limit", limit}};
        if (!localize.empty()) body["localize"] = localize;
        if (!geo.empty()) body["geo"] = geo;
        print(call(open(), "POST", "/query", {}, body));
    });

    // curate
    auto* curate = app.add_subcommand("curate", "Analyst curation queue");
    curate->require_subcommand(1);
    auto* clist = curate->add_subcommand("list", "List tasks (open by default)");
    Filters cf;
    clist->add_option("--status", cf.status, "pending, in_review, confirmed, rejected");
    clist->add_option("--country", cf.country);
    clist->add_option("--article", cf.article_id);
    clist->callback([&] {
        const auto data = call(open(), "GET", "/curation/tasks", cf.params());
        for (const auto& t : data.at("items"))
            std::cout << t.at("id").get<std::string>() << '\t' << t.at("status").get<std::string>() << "\tv"
                      << t.at("version") << "\tmissing=" << t.at("missing").dump() << '\n';
    });
    std::string task_id, action_kind, payload = "{}", analyst;
    std::optional<std::size_t> expected_version;
    auto* show = curate->add_subcommand("show", "Show one task");
    show->add_option("task", task_id)->required();
    show->callback([&] { print(call(open(), "GET", "/curation/tasks/" + task_id)); });
    auto* apply = curate->add_subcommand("apply", "Apply an analyst action");
    apply->add_option("task", task_id)->required();
    apply->add_option("--kind", action_kind)->required();
    apply->add_option("--payload", payload, "JSON object");
    apply->add_option("--analyst", analyst);
    apply->add_option("--expected-version", expected_version);
    apply->callback([&] {
        json body{{"kind", action_kind}, {"payload", parse_json_arg(payload, "payload")}, {"analyst", analyst}};
        if (expected_version) body["expected_version"] = *expected_version;
        print(call(open(), "POST", "/curation/tasks/" + task_id + "/actions", {}, body));
    });
    auto* promote = curate->add_subcommand("promote", "Turn a validated task into an event");
    promote->add_option("task", task_id)->required();
    promote->callback([&] { print(call(open(), "POST", "/curation/tasks/" + task_id + ":promote")); });

    // events
    auto* events = app.add_subcommand("events", "Event history analytics");
    events->require_subcommand(1);
    Filters ef;
    auto* equery = events->add_subcommand("query", "Filter events");
    ef.add_event_options(equery);
    equery->callback([&] {
        auto p = ef.params();
        p["limit"] = std::to_string(service::kMaxPageSize);
        print(call(open(), "GET", "/events", p).at("items"));
    });
    auto* heat = events->add_subcommand("heatmap", "Grid counts as a feature collection");
    ef.add_event_options(heat);
    double cell_deg = 1.0;
    std::string grid, output;
    heat->add_option("--cell-deg", cell_deg);
    heat->add_option("--grid", grid, "Grid bbox (default Latin America)");
    heat->footer("Without --date, --from or --to the window is 1890..1900.");
    heat->add_option("--output", output, "Write to file");
    heat->callback([&] {
        auto p = ef.params();
        p["cell_deg"] = std::to_string(cell_deg);
        if (!grid.empty()) p["grid"] = grid;
        const auto data = call(open(), "GET", "/events/heatmap", p);
        if (output.empty()) return print(data);
        std::ofstream(output) << data.dump(2) << '\n';
    });
    auto* famous = events->add_subcommand("famous", "Most reported events");
    ef.add_event_options(famous);
    std::size_t k = 10;
    famous->add_option("-k", k);
    famous->callback([&] {
        auto p = ef.params();
        p["k"] = std::to_string(k);
        print(call(open(), "GET", "/events/famous", p));
    });
    auto* evo = events->add_subcommand("evolution", "Term usage over time per country");
    std::string concept_term, countries;
    int first = 1800, last = 1900, width = 10;
    evo->add_option("--concept", concept_term)->required();
    evo->add_option("--from", first);
    evo->add_option("--to", last);
    evo->add_option("--width", width);
    evo->add_option("--countries", countries, "Comma-separated codes");
    evo->callback([&] {
        service::Params p{{"concept", concept_term},
                          {"from", std::to_string(first)},
                          {"to", std::to_string(last)},
                          {"width", std::to_string(width)}};
        if (!countries.empty()) p["countries"] = countries;
        print(call(open(), "GET", "/events/evolution", p));
    });
    auto* exp = events->add_subcommand("export", "Export events");
    ef.add_event_options(exp);
    std::string format = "jsonl";
    exp->add_option("--format", format, "jsonl or geojson");
    exp->add_option("--output", output, "Write to file");
    exp->callback([&] {
        auto p = ef.params();
        p["format"] = format;
        const auto data = call(open(), "GET", "/events/export", p);
        const auto content = data.at("content").is_string() ? data.at("content").get<std::string>()
                                                             : data.at("content").dump(2) + "\n";
        if (output.empty()) std::cout << content;
        else std::ofstream(output) << content;
    });

    // serve
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    std::string listen;
    serve->add_option("--listen", listen, "host:port");
    serve->callback([&] {
        const auto& a = open();
        auto host = workspace->config().host;
        auto port = workspace->config().port;
        if (!listen.empty()) {
            const auto colon = listen.rfind(':');
            host = listen.substr(0, colon);
            port = std::stoi(listen.substr(colon + 1));
        }
        service::Server server(a);
        g_server = &server;
        std::signal(SIGINT, on_signal);
        std::signal(SIGTERM, on_signal);
        const auto bound = server.bind(host, port);
        std::cerr << "listening on " << host << ':' << bound << '\n';
        server.listen();
        g_server = nullptr;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error [" << code_name(e.code()) << "]: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
