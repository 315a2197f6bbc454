#include "hemeroteca/service/api.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>

#include "hemeroteca/events/analytics.hpp"
#include "hemeroteca/query/evaluate.hpp"
#include "hemeroteca/query/parser.hpp"
#include "hemeroteca/query/rewrite.hpp"
#include "hemeroteca/service/params.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::service {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotFound: return 404;
        case ErrorCode::ValidationFailed: return 422;
        case ErrorCode::Conflict:
        case ErrorCode::VersionConflict: return 409;
        case ErrorCode::ParseError:
        case ErrorCode::BadRequest: return 400;
        case ErrorCode::Unauthorized: return 401;
        case ErrorCode::Internal: return 500;
    }
    return 500;
}

json ok_envelope(json data) { return {{"status", "ok"}, {"data", std::move(data)}}; }

json error_envelope(const Error& e) {
    return {{"status", "error"},
            {"error", {{"code", code_name(e.code())}, {"message", e.what()}, {"details", e.details()}}}};
}

namespace {

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/') ++i;
        const auto j = path.find('/', i);
        const auto end = j == std::string_view::npos ? path.size() : j;
        if (end > i) out.emplace_back(path.substr(i, end - i));
        i = end;
    }
    return out;
}

/// Splits "name:verb" at the last colon.
std::pair<std::string, std::string> split_verb(const std::string& segment) {
    const auto colon = segment.rfind(':');
    if (colon == std::string::npos) return {segment, ""};
    return {segment.substr(0, colon), segment.substr(colon + 1)};
}

std::size_t parse_offset(const std::string& cursor) {
    std::size_t n = 0;
    if (cursor.size() < 2 || cursor[0] != 'p' ||
        std::from_chars(cursor.data() + 1, cursor.data() + cursor.size(), n).ec != std::errc{})
        throw Error(ErrorCode::BadRequest, "invalid cursor", {cursor});
    return n;
}

json page(const std::vector<json>& items, const Params& params) {
    const std::size_t limit = std::clamp<std::size_t>(size_param(params, "limit", kDefaultPageSize), 1, kMaxPageSize);
    const std::size_t offset = params.contains("cursor") ? parse_offset(params.at("cursor")) : 0;
    json slice = json::array();
    for (std::size_t i = offset; i < items.size() && i < offset + limit; ++i) slice.push_back(items[i]);
    json next = nullptr;
    if (offset + limit < items.size()) next = "p" + std::to_string(offset + limit);
    return {{"items", std::move(slice)}, {"next_cursor", std::move(next)}, {"total", items.size()}};
}

const json& require_body(const Request& r) {
    if (!r.body.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
    return r.body;
}

std::string required_string(const json& body, const char* key) {
    if (!body.contains(key) || !body.at(key).is_string())
        throw Error(ErrorCode::ValidationFailed, std::string("missing field \"") + key + "\"", {key});
    return body.at(key).get<std::string>();
}

json to_json(const corpus::IngestReport& report) {
    json rejected = json::array();
    for (const auto& r : report.rejected) rejected.push_back({{"line", r.line}, {"reason", r.reason}});
    return {{"accepted", report.accepted}, {"rejected", rejected}};
}

json scored(const std::vector<query::ScoredDoc>& docs, std::size_t limit) {
    json out = json::array();
    for (std::size_t i = 0; i < docs.size() && i < limit; ++i) out.push_back({{"id", docs[i].doc}, {"score", docs[i].score}});
    return out;
}

struct Handlers {
    app::Workspace& ws;

    json ingest(const Request& r) const {
        const auto& body = require_body(r);
        std::stringstream records;
        if (body.contains("records")) {
            for (const auto& rec : body.at("records")) records << rec.dump() << '\n';
        } else if (body.contains("jsonl")) {
            records << body.at("jsonl").get<std::string>();
        } else {
            throw Error(ErrorCode::ValidationFailed, "ingest needs \"records\" or \"jsonl\"");
        }
        const auto mapping = body.contains("mapping") ? corpus::MetadataMapping::from_json(body.at("mapping"))
                                                      : corpus::MetadataMapping{};
        auto report = ws.articles().ingest(records, mapping);
        auto out = to_json(report);
        out["store_size"] = ws.articles().size();
        return out;
    }

    json list_articles(const Request& r) const {
        std::vector<json> items;
        for (const auto& s : ws.articles().list_articles(article_filter_from(r.params))) items.push_back(corpus::to_json(s));
        return page(items, r.params);
    }

    json get_article(const Request& r, const std::string& id) const {
        const auto article = ws.articles().get_article(id);
        json out{{"article", corpus::to_json(article)}};
        if (r.params.contains("view") && r.params.at("view") == "tree") {
            const auto res = ws.pipeline_resources();
            const auto tree = lingpipe::build_content_tree(article, res);
            json candidates = json::array();
            for (const auto& c : lingpipe::extract_event_candidates(tree, res)) candidates.push_back(lingpipe::to_json(c));
            out["tree"] = lingpipe::to_json(tree);
            out["candidates"] = candidates;
        }
        json events = json::array();
        for (const auto& e : ws.events().for_article(id)) events.push_back(e.id);
        out["events"] = events;
        return out;
    }

    json run_pipeline(const Request& r) const {
        const json body = r.body.is_object() ? r.body : json::object();
        std::vector<corpus::Article> articles;
        if (body.contains("ids")) {
            for (const auto& id : body.at("ids")) articles.push_back(ws.articles().get_article(id.get<std::string>()));
        } else {
            Params p;
            for (const auto& [k, v] : body.items())
                if (v.is_string()) p[k] = v.get<std::string>();
            articles = ws.articles().select(article_filter_from(p));
        }
        const auto results = lingpipe::run_pipeline(articles, ws.pipeline_resources());
        std::vector<lingpipe::EventCandidate> candidates;
        for (const auto& res : results) candidates.insert(candidates.end(), res.candidates.begin(), res.candidates.end());
        json cand = json::array();
        for (const auto& c : candidates) cand.push_back(lingpipe::to_json(c));
        json tasks = json::array();
        if (body.value("enqueue", true))
            for (const auto& t : ws.curation().enqueue(candidates, ws.articles())) tasks.push_back(t.id);
        return {{"processed", results.size()}, {"candidates", cand}, {"tasks", tasks}};
    }

    json list_terms(const Request& r) const {
        std::vector<json> items;
        const auto country = optional_param(r.params, "country");
        for (const auto& e : ws.vocabulary().entries())
            if (!country || e.country == *country) items.push_back(vocab::to_json(e));
        return page(items, r.params);
    }

    json add_term(const Request& r) const {
        const auto& body = require_body(r);
        const auto reg = vocab::parse_register(body.value("register", std::string("colloquial")));
        return vocab::to_json(ws.vocabulary().add_term(required_string(body, "term"), required_string(body, "country"), reg));
    }

    json link_terms(const Request& r) const {
        const auto& body = require_body(r);
        std::optional<std::string> country;
        if (body.contains("country") && body.at("country").is_string()) country = body.at("country").get<std::string>();
        const auto rel = ws.vocabulary().link_terms(required_string(body, "from"), required_string(body, "to"),
                                                    vocab::parse_relation(required_string(body, "kind")), country);
        return vocab::to_json(rel);
    }

    json expand(const Request& r) const {
        const auto term = optional_param(r.params, "term");
        if (!term) throw Error(ErrorCode::ValidationFailed, "missing parameter \"term\"", {"term"});
        const int depth = static_cast<int>(size_param(r.params, "depth", 1));
        const auto e = ws.vocabulary().expand_term(*term, {}, depth);
        return {{"term", *term}, {"synonyms", e.synonyms}, {"hypernyms", e.hypernyms}, {"hyponyms", e.hyponyms}};
    }

    json tf(const Request& r) const {
        const auto articles = ws.articles().select(article_filter_from(r.params));
        const auto m = vocab::build_tf_matrix(articles, &ws.stoplist());
        return tf_to_json(m, size_param(r.params, "terms", kDefaultPageSize));
    }

    json run_query(const Request& r) const {
        const auto& body = require_body(r);
        const auto q = query::parse_query(required_string(body, "q"));
        const auto options = rewrite_options_from(body, ws.gazetteer());
        const auto plan = query::plan_rewrites(q, ws.vocabulary(), ws.rules(), options);
        json out{{"plan", query::to_json(plan)}};
        if (!body.value("run", true)) return out;

        const auto index = ws.articles().index();
        const auto limit = body.value("limit", kDefaultPageSize);
        auto run = [&](const query::QueryExpr& e) { return scored(query::evaluate(e, *index, &ws.events()), limit); };
        json results{{"original", run(plan.original)}};
        if (options.extend) results["extended"] = run(plan.extended);
        json localized = json::object();
        for (const auto& [c, e] : plan.localized) localized[c] = run(e);
        results["localized"] = localized;
        json variants = json::array();
        for (const auto& v : plan.rule_variants) variants.push_back(run(v));
        results["rule_variants"] = variants;
        out["results"] = results;
        return out;
    }

    json list_tasks(const Request& r) const {
        const auto tasks = ws.curation().next_tasks(task_filter_from(r.params), std::numeric_limits<std::size_t>::max());
        std::vector<json> items;
        for (const auto& t : tasks) items.push_back(curation::to_json(t));
        return page(items, r.params);
    }

    json apply_action(const Request& r, const std::string& id) const {
        const auto& body = require_body(r);
        std::optional<std::size_t> expected;
        if (body.contains("expected_version")) expected = body.at("expected_version").get<std::size_t>();
        return curation::to_json(ws.curation().apply(id, curation::action_from_json(body), expected));
    }

    json promote(const std::string& id) const {
        return events::to_json(ws.curation().promote(id, ws.events(), ws.rules()));
    }

    json list_events(const Request& r) const {
        const auto all = ws.events().all();
        std::vector<json> items;
        for (const auto& e : events::query_events(all, event_filter_from(r.params))) items.push_back(events::to_json(e));
        return page(items, r.params);
    }

    json heatmap(const Request& r) const {
        const auto all = ws.events().all();
        auto filter = event_filter_from(r.params);
        if (!filter.time_range) filter.time_range = DateRange::years(events::kHeatmapFirstYear, events::kHeatmapLastYear);
        const auto selected = events::query_events(all, filter);
        const auto grid_box = r.params.contains("grid") ? events::BBox::parse(r.params.at("grid")) : events::kLatinAmerica;
        const double cell = double_param(r.params, "cell_deg", events::kDefaultCellDeg);
        auto out = events::export_heatmap(events::heatmap(selected, cell, grid_box));
        out["event_count"] = selected.size();
        return out;
    }

    json famous(const Request& r) const {
        const auto all = ws.events().all();
        json out = json::array();
        for (const auto& [e, n] : events::most_reported(all, event_filter_from(r.params), size_param(r.params, "k", 10)))
            out.push_back({{"event", events::to_json(e)}, {"articles", n}});
        return out;
    }

    json evolution(const Request& r) const {
        const auto concept_term = optional_param(r.params, "concept");
        if (!concept_term) throw Error(ErrorCode::ValidationFailed, "missing parameter \"concept\"", {"concept"});
        const auto articles = ws.articles().select({});
        return events::to_json(events::term_evolution(articles, ws.vocabulary(), *concept_term,
                                                      buckets_from(r.params), list_param(r.params, "countries")));
    }

    json export_events(const Request& r) const {
        const auto all = ws.events().all();
        const auto selected = events::query_events(all, event_filter_from(r.params));
        const auto format = r.params.contains("format") ? r.params.at("format") : std::string("jsonl");
        const auto content = events::export_events(selected, format);
        if (format == "geojson") return {{"format", format}, {"content", json::parse(content)}};
        return {{"format", format}, {"content", content}};
    }
};

[[noreturn]] void method_not_allowed(const Request& r) {
    throw Error(ErrorCode::BadRequest, "method not allowed", {r.method, r.path});
}

}  // namespace

Api::Api(app::Workspace& workspace) : ws_(workspace) {}

json Api::dispatch(const Request& r) const {
    const Handlers h{ws_};
    const auto seg = split_path(r.path);
    const bool get = r.method == "GET";
    const bool post = r.method == "POST";
    auto route = [&](bool allowed) {
        if (!allowed) method_not_allowed(r);
    };
    if (seg.empty()) throw not_found("route " + r.path);

    if (seg.size() == 1 && seg[0] == "health") return route(get), json{{"articles", ws_.articles().size()}, {"events", ws_.events().size()}};
    if (seg[0] == "articles:ingest" && seg.size() == 1) return route(post), h.ingest(r);
    if (seg[0] == "articles") {
        if (seg.size() == 1) return route(get), h.list_articles(r);
        if (seg.size() == 2) return route(get), h.get_article(r, seg[1]);
    }
    if (seg[0] == "pipeline" && seg.size() == 2 && seg[1] == "run") return route(post), h.run_pipeline(r);
    if (seg[0] == "vocab" && seg.size() == 2) {
        if (seg[1] == "terms") return post ? h.add_term(r) : (route(get), h.list_terms(r));
        if (seg[1] == "links") return route(post), h.link_terms(r);
        if (seg[1] == "expand") return route(get), h.expand(r);
        if (seg[1] == "tf") return route(get), h.tf(r);
    }
    if (seg[0] == "query" && seg.size() == 1) return route(post), h.run_query(r);
    if (seg[0] == "curation" && seg.size() >= 2 && seg[1] == "tasks") {
        if (seg.size() == 2) return route(get), h.list_tasks(r);
        if (seg.size() == 4 && seg[3] == "actions") return route(post), h.apply_action(r, seg[2]);
        if (seg.size() == 3) {
            const auto [id, verb] = split_verb(seg[2]);
            if (verb == "promote") return route(post), h.promote(id);
            return route(get), curation::to_json(ws_.curation().get(seg[2]));
        }
    }
    if (seg[0] == "events") {
        if (seg.size() == 1) return route(get), h.list_events(r);
        if (seg.size() == 2) {
            route(get);
            if (seg[1] == "heatmap") return h.heatmap(r);
            if (seg[1] == "famous") return h.famous(r);
            if (seg[1] == "evolution") return h.evolution(r);
            if (seg[1] == "export") return h.export_events(r);
            return events::to_json(ws_.events().get(seg[1]));
        }
    }
    throw not_found("route " + r.path);
}

Response Api::handle(const Request& r) const {
    try {
        const auto& token = ws_.config().api_token;
        if (token && r.token != *token) throw Error(ErrorCode::Unauthorized, "missing or invalid X-Api-Token");
        return {200, ok_envelope(dispatch(r))};
    } catch (const Error& e) {
        return {http_status(e.code()), error_envelope(e)};
    } catch (const json::exception& e) {
        const Error err(ErrorCode::BadRequest, std::string("malformed request: ") + e.what());
        return {400, error_envelope(err)};
    } catch (const std::exception& e) {
        const Error err(ErrorCode::Internal, e.what());
        return {500, error_envelope(err)};
    }
}

}  // namespace hemeroteca::service
