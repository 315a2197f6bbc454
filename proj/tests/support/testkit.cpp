#include "testkit.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hemeroteca/events/analytics.hpp"
#include "hemeroteca/geo/gazetteer.hpp"
#include "hemeroteca/text/normalize.hpp"
#include "hemeroteca/text/tokenizer.hpp"

namespace hemeroteca::testkit {

std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(HEMEROTECA_FIXTURES) / name; }

std::filesystem::path resources_dir() { return HEMEROTECA_RESOURCES; }

std::vector<corpus::Article> fixture_articles() {
    std::vector<corpus::Article> out;
    std::ifstream in(fixture("corpus.jsonl"));
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(corpus::article_from_json(nlohmann::json::parse(line)));
    return out;
}

std::vector<events::ClimateEvent> fixture_events() {
    std::ifstream in(fixture("events40.jsonl"));
    std::stringstream ss;
    ss << in.rdbuf();
    return events::import_events(ss.str());
}

std::vector<std::string> fixture_lines(const std::string& name) {
    std::vector<std::string> out;
    std::ifstream in(fixture(name));
    for (std::string line; std::getline(in, line);)
        if (auto t = text::trim(line); !t.empty() && t[0] != '#') out.push_back(t);
    return out;
}

app::Config memory_config() {
    app::Config c;
    c.resources_dir = resources_dir();
    c.resolve();
    return c;
}

TempDir::TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() / ("hemeroteca-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

const std::vector<std::string>& random_words() {
    static const std::vector<std::string> words{"tormenta", "lluvia",  "río",   "crecida", "inundación", "viento",
                                                "fuerte",   "norte",   "sur",   "calor",   "helada",     "granizo",
                                                "Montevideo", "ciudad", "puerto", "daños"};
    return words;
}

std::vector<corpus::Article> random_corpus(std::mt19937& rng, std::size_t max_docs) {
    const auto& words = random_words();
    std::uniform_int_distribution<std::size_t> n_docs(1, max_docs), n_words(1, 30), pick(0, words.size() - 1);
    std::uniform_int_distribution<int> year(1800, 1900), punct(0, 7);
    std::vector<corpus::Article> out;
    const auto n = n_docs(rng);
    for (std::size_t d = 0; d < n; ++d) {
        corpus::Article a;
        a.id = "d" + std::to_string(1000 + d);
        a.newspaper = {"El Siglo", "UY", "1", 1, {}, {}};
        a.publication_date = PartialDate(year(rng));
        const auto len = n_words(rng);
        for (std::size_t w = 0; w < len; ++w) {
            if (w) a.raw_text += punct(rng) == 0 ? ". " : " ";
            a.raw_text += words[pick(rng)];
        }
        out.push_back(std::move(a));
    }
    return out;
}

query::QueryExpr random_query(std::mt19937& rng, int max_depth, const std::vector<std::string>& words) {
    std::uniform_int_distribution<int> coin(0, 99), arity(2, 3), phrase_len(1, 2);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    if (max_depth <= 1 || coin(rng) < 35) {
        std::vector<std::string> phrase;
        const int len = phrase_len(rng);
        for (int i = 0; i < len; ++i) {
            auto w = text::normalize(words[pick(rng)]);
            if (coin(rng) < 25) w = text::strip_accents(w);
            if (coin(rng) < 5) w = "sequía";
            phrase.push_back(std::move(w));
        }
        return query::QueryExpr::term(std::move(phrase));
    }
    std::vector<query::QueryExpr> children;
    const int n = arity(rng);
    for (int i = 0; i < n; ++i) children.push_back(random_query(rng, max_depth - 1, words));
    return coin(rng) < 50 ? query::QueryExpr::all_of(std::move(children))
                          : query::QueryExpr::any_of(std::move(children));
}

bool oracle_phrase(const std::vector<std::string>& phrase, const corpus::Article& doc) {
    const auto tokens = text::normalized_words(doc.raw_text);
    auto same = [](const std::string& token, const std::string& word) {
        return token == word || text::strip_accents(token) == word;
    };
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
        bool ok = true;
        for (std::size_t j = 0; j < phrase.size() && ok; ++j) ok = same(tokens[i + j], phrase[j]);
        if (ok) return true;
    }
    return false;
}

namespace {

bool oracle_doc(const query::QueryExpr& q, const corpus::Article& doc) {
    using Kind = query::QueryExpr::Kind;
    switch (q.kind) {
        case Kind::Term: return oracle_phrase(q.phrase, doc);
        case Kind::And:
            for (const auto& c : q.children)
                if (!oracle_doc(c, doc)) return false;
            return true;
        case Kind::Or:
            for (const auto& c : q.children)
                if (oracle_doc(c, doc)) return true;
            return false;
        case Kind::Constraint: return false;
    }
    return false;
}

}  // namespace

std::set<std::string> oracle_matches(const query::QueryExpr& q, const std::vector<corpus::Article>& docs) {
    std::set<std::string> out;
    for (const auto& d : docs)
        if (oracle_doc(q, d)) out.insert(d.id);
    return out;
}

events::EventFilter random_event_filter(std::mt19937& rng) {
    std::uniform_int_distribution<int> coin(0, 99), year(1845, 1900), span(0, 30);
    std::uniform_real_distribution<double> lat(-55, 30), lon(-115, -35), size(5, 60), radius(100, 3000);
    const std::vector<std::string> countries{"UY", "MX", "CO", "EC", "AR", "CU"};
    const std::vector<std::string> names{"Gran Temporal", "gran temporal", "Sudestada Grande", "Ciclon de San Narciso"};
    const std::vector<std::string> damages{"inundacion", "cosechas", "casas destruidas", "derrumbe"};
    events::EventFilter f;
    f.bbox = events::kLatinAmerica;
    if (coin(rng) < 40) {
        const double a = lat(rng), b = lon(rng);
        f.bbox = events::BBox{a, b, std::min(90.0, a + size(rng)), std::min(180.0, b + size(rng))};
    }
    if (coin(rng) < 35) f.country = countries[static_cast<std::size_t>(coin(rng)) % countries.size()];
    if (coin(rng) < 30) {
        f.center = geo::GeoPoint{lat(rng), lon(rng)};
        f.radius_km = radius(rng);
    }
    if (coin(rng) < 50) {
        const int y = year(rng);
        f.time_range = DateRange::years(y, y + span(rng));
    }
    if (coin(rng) < 15) f.name = names[static_cast<std::size_t>(coin(rng)) % names.size()];
    if (coin(rng) < 25) f.damage_term = damages[static_cast<std::size_t>(coin(rng)) % damages.size()];
    return f;
}

std::vector<std::string> oracle_events(const std::vector<events::ClimateEvent>& all, const events::EventFilter& f) {
    auto words_of = [](const std::string& s) {
        std::vector<std::string> out;
        for (const auto& w : text::phrase_words(s)) out.push_back(text::strip_accents(w));
        return out;
    };
    std::vector<const events::ClimateEvent*> hits;
    for (const auto& e : all) {
        bool ok = true;
        for (const auto& p : e.scope) {
            // single-point fixture: the one scope point decides every spatial test
            if (f.country && p.country != *f.country) ok = false;
            if (f.bbox && !(p.lat >= f.bbox->min_lat && p.lat <= f.bbox->max_lat && p.lon >= f.bbox->min_lon &&
                            p.lon <= f.bbox->max_lon))
                ok = false;
            if (f.center && f.radius_km && geo::distance_km(*f.center, p.point()) > *f.radius_km) ok = false;
        }
        if (f.time_range) {
            const auto span = e.duration.value_or(DateRange::of(e.date));
            if (span.last_day() < f.time_range->first_day() || span.first_day() > f.time_range->last_day()) ok = false;
        }
        if (f.name && (!e.name || text::shadow_key(*e.name) != text::shadow_key(*f.name))) ok = false;
        if (f.damage_term) {
            const auto needle = words_of(*f.damage_term);
            bool any = false;
            for (const auto& d : e.damages) {
                const auto hay = words_of(d);
                any = any || std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
            }
            ok = ok && any;
        }
        if (ok) hits.push_back(&e);
    }
    std::sort(hits.begin(), hits.end(), [](const auto* a, const auto* b) {
        const auto da = a->duration.value_or(DateRange::of(a->date)).first_day();
        const auto db = b->duration.value_or(DateRange::of(b->date)).first_day();
        return da != db ? da < db : a->id < b->id;
    });
    std::vector<std::string> out;
    for (const auto* e : hits) out.push_back(e->id);
    return out;
}

}  // namespace hemeroteca::testkit
