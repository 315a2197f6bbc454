#include "hemeroteca/corpus/article.hpp"

#include <cctype>
#include <fstream>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::corpus {

using nlohmann::json;

CountryRegistry::CountryRegistry() : codes_{"MX", "CO", "EC", "UY"} {}

CountryRegistry& CountryRegistry::instance() {
    static CountryRegistry registry;
    return registry;
}

bool CountryRegistry::supported(const std::string& code) const { return codes_.contains(code); }

void CountryRegistry::register_extension(const std::string& code) {
    if (code.size() != 2 || !std::isupper(static_cast<unsigned char>(code[0])) ||
        !std::isupper(static_cast<unsigned char>(code[1])))
        throw Error(ErrorCode::ValidationFailed, "country code must be ISO-3166 alpha-2: " + code);
    codes_.insert(code);
}

std::set<std::string> CountryRegistry::codes() const { return codes_; }

void validate(const Article& a) {
    if (a.id.empty()) throw Error(ErrorCode::ValidationFailed, "missing field: id");
    if (text::trim(a.raw_text).empty()) throw Error(ErrorCode::ValidationFailed, "empty raw_text");
    if (!CountryRegistry::instance().supported(a.newspaper.country))
        throw Error(ErrorCode::ValidationFailed, "unsupported country: " + a.newspaper.country);
    if (a.newspaper.pages < 1) throw Error(ErrorCode::ValidationFailed, "pages must be positive");
    const auto& ws = a.newspaper.window_start;
    const auto& we = a.newspaper.window_end;
    if (ws && we) {
        if (ws->first_day() > we->last_day())
            throw Error(ErrorCode::ValidationFailed, "circulation window start after end");
        const DateRange window{*ws, *we};
        if (!window.contains(a.publication_date))
            throw Error(ErrorCode::ValidationFailed, "date outside circulation window");
    }
}

json to_json(const Article& a) {
    json paper{{"name", a.newspaper.name},
               {"country", a.newspaper.country},
               {"issue_label", a.newspaper.issue_label},
               {"pages", a.newspaper.pages}};
    if (a.newspaper.window_start) paper["window_start"] = a.newspaper.window_start->to_string();
    if (a.newspaper.window_end) paper["window_end"] = a.newspaper.window_end->to_string();
    json out{{"id", a.id}, {"newspaper", paper}, {"date", a.publication_date.to_string()}, {"text", a.raw_text}};
    if (a.ocr_link) out["ocr_link"] = *a.ocr_link;
    if (!a.source_library.empty()) out["source_library"] = a.source_library;
    return out;
}

namespace {

std::string required_string(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) throw Error(ErrorCode::ValidationFailed, "missing field: " + path);
    if (!it->is_string()) throw Error(ErrorCode::ValidationFailed, "field must be a string: " + path);
    return it->get<std::string>();
}

std::optional<PartialDate> optional_date(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    if (it->is_number_integer()) return PartialDate(it->get<int>());
    if (!it->is_string()) throw Error(ErrorCode::ValidationFailed, std::string("field must be a date: ") + key);
    const auto s = it->get<std::string>();
    if (s.empty()) return std::nullopt;
    return PartialDate::parse(s);
}

}  // namespace

Article article_from_json(const json& r, const std::string& source_library) {
    if (!r.is_object()) throw Error(ErrorCode::ValidationFailed, "record is not an object");
    Article a;
    a.id = required_string(r, "id", "id");
    auto np = r.find("newspaper");
    if (np == r.end() || !np->is_object()) throw Error(ErrorCode::ValidationFailed, "missing field: newspaper");
    a.newspaper.name = required_string(*np, "name", "newspaper.name");
    a.newspaper.country = required_string(*np, "country", "newspaper.country");
    if (auto it = np->find("issue_label"); it != np->end() && !it->is_null())
        a.newspaper.issue_label = it->is_string() ? it->get<std::string>() : it->dump();
    if (auto it = np->find("pages"); it != np->end() && !it->is_null()) {
        if (!it->is_number_integer()) throw Error(ErrorCode::ValidationFailed, "pages must be an integer");
        a.newspaper.pages = it->get<int>();
    }
    a.newspaper.window_start = optional_date(*np, "window_start");
    a.newspaper.window_end = optional_date(*np, "window_end");
    auto date = optional_date(r, "date");
    if (!date) throw Error(ErrorCode::ValidationFailed, "missing field: date");
    a.publication_date = *date;
    if (auto it = r.find("text"); it != r.end() && it->is_string()) a.raw_text = it->get<std::string>();
    if (auto it = r.find("ocr_link"); it != r.end() && it->is_string()) a.ocr_link = it->get<std::string>();
    a.source_library = source_library;
    if (auto it = r.find("source_library"); it != r.end() && it->is_string() && source_library.empty())
        a.source_library = it->get<std::string>();
    return a;
}

MetadataMapping::MetadataMapping(std::string source_library, std::map<std::string, std::string> renames)
    : source_library_(std::move(source_library)), renames_(std::move(renames)) {}

MetadataMapping MetadataMapping::from_json(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::ValidationFailed, "mapping must be an object");
    std::map<std::string, std::string> renames;
    if (auto it = doc.find("fields"); it != doc.end()) {
        if (!it->is_object()) throw Error(ErrorCode::ValidationFailed, "mapping.fields must be an object");
        for (const auto& [src, dst] : it->items()) {
            if (!dst.is_string()) throw Error(ErrorCode::ValidationFailed, "mapping target must be a string: " + src);
            renames.emplace(src, dst.get<std::string>());
        }
    }
    return MetadataMapping(doc.value("source_library", std::string{}), std::move(renames));
}

MetadataMapping MetadataMapping::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw not_found("mapping file " + path);
    try {
        return from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ValidationFailed, "malformed mapping file: " + std::string(e.what()));
    }
}

namespace {

json::json_pointer pointer(const std::string& dotted) {
    std::string p;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        p += "/" + dotted.substr(start, dot == std::string::npos ? dot : dot - start);
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return json::json_pointer(p);
}

}  // namespace

json MetadataMapping::apply(const json& record) const {
    if (renames_.empty() || !record.is_object()) return record;
    json out = record;
    for (const auto& [src, dst] : renames_) {
        const auto from = pointer(src);
        if (!out.contains(from)) continue;
        json value = out.at(from);
        // Erase the source leaf before writing so a rename inside the same
        // object does not clobber the new value.
        const auto parent = from.parent_pointer();
        out.at(parent).erase(from.back());
        out[pointer(dst)] = std::move(value);
    }
    return out;
}

bool ArticleFilter::matches(const Article& a) const {
    if (country && a.newspaper.country != *country) return false;
    if (newspaper && text::normalize(a.newspaper.name) != text::normalize(*newspaper)) return false;
    if (date_range && !date_range->intersects(DateRange::of(a.publication_date))) return false;
    return true;
}

ArticleSummary summarize(const Article& a) {
    std::string excerpt = text::trim(a.raw_text);
    if (excerpt.size() > 120) {
        std::size_t cut = 120;
        // Do not split a UTF-8 sequence.
        while (cut > 0 && (static_cast<unsigned char>(excerpt[cut]) & 0xC0) == 0x80) --cut;
        excerpt = excerpt.substr(0, cut) + "...";
    }
    return {a.id, a.newspaper.name, a.newspaper.country, a.publication_date.to_string(), excerpt};
}

json to_json(const ArticleSummary& s) {
    return {{"id", s.id}, {"newspaper", s.newspaper}, {"country", s.country}, {"date", s.date}, {"excerpt", s.excerpt}};
}

}  // namespace hemeroteca::corpus
