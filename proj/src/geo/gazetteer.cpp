#include "hemeroteca/geo/gazetteer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <tuple>

#include "hemeroteca/common/error.hpp"
#include "hemeroteca/text/normalize.hpp"

namespace hemeroteca::geo {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

int importance(FeatureKind k) { return static_cast<int>(k); }

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        cols.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return cols;
}

}  // namespace

double distance_km(GeoPoint a, GeoPoint b) noexcept {
    const double dlat = (b.lat - a.lat) * kDeg;
    const double dlon = (b.lon - a.lon) * kDeg;
    const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                     std::cos(a.lat * kDeg) * std::cos(b.lat * kDeg) * std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(std::clamp(s, 0.0, 1.0)));
}

std::optional<GeoPoint> spherical_centroid(const std::vector<GeoPoint>& points) {
    if (points.empty()) return std::nullopt;
    double x = 0, y = 0, z = 0;
    for (const auto& p : points) {
        x += std::cos(p.lat * kDeg) * std::cos(p.lon * kDeg);
        y += std::cos(p.lat * kDeg) * std::sin(p.lon * kDeg);
        z += std::sin(p.lat * kDeg);
    }
    const double norm = std::sqrt(x * x + y * y + z * z);
    if (norm < 1e-12) return std::nullopt;
    return GeoPoint{std::asin(z / norm) / kDeg, std::atan2(y, x) / kDeg};
}

std::string_view feature_name(FeatureKind kind) noexcept {
    switch (kind) {
        case FeatureKind::City: return "city";
        case FeatureKind::Town: return "town";
        case FeatureKind::Village: return "village";
        case FeatureKind::Region: return "region";
        case FeatureKind::River: return "river";
        case FeatureKind::Other: return "other";
    }
    return "other";
}

FeatureKind parse_feature(std::string_view name) {
    for (auto k : {FeatureKind::City, FeatureKind::Town, FeatureKind::Village, FeatureKind::Region,
                   FeatureKind::River, FeatureKind::Other})
        if (feature_name(k) == name) return k;
    throw Error(ErrorCode::ValidationFailed, "unknown feature kind: " + std::string(name));
}

nlohmann::json to_json(const GazetteerEntry& e) {
    return {{"name", e.name},       {"display_name", e.display_name}, {"lat", e.lat},
            {"lon", e.lon},         {"country", e.country},           {"feature", feature_name(e.feature)}};
}

GazetteerEntry gazetteer_entry_from_json(const nlohmann::json& j) {
    return {j.at("name").get<std::string>(), j.at("display_name").get<std::string>(), j.at("lat").get<double>(),
            j.at("lon").get<double>(),       j.at("country").get<std::string>(),
            parse_feature(j.at("feature").get<std::string>())};
}

std::vector<GazetteerEntry> rank_candidates(std::vector<GazetteerEntry> candidates, const RankContext& ctx) {
    const auto centroid = spherical_centroid(ctx.nearby_confirmed_points);
    auto key = [&](const GazetteerEntry& e) {
        const bool foreign = ctx.newspaper_country && e.country != *ctx.newspaper_country;
        const double dist = centroid ? distance_km(e.point(), *centroid) : 0.0;
        return std::make_tuple(foreign, dist, importance(e.feature), std::cref(e.display_name),
                               std::cref(e.country), e.lat, e.lon);
    };
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const GazetteerEntry& a, const GazetteerEntry& b) { return key(a) < key(b); });
    return candidates;
}

Gazetteer Gazetteer::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw not_found("gazetteer file " + path);
    return parse(in);
}

Gazetteer Gazetteer::parse(std::istream& in) {
    Gazetteer g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto cols = split_tabs(line);
        if (line_no == 1 && cols[0] == "name") continue;
        if (cols.size() != 6)
            throw Error(ErrorCode::ValidationFailed, "gazetteer line " + std::to_string(line_no) + ": expected 6 columns");
        try {
            g.add({cols[0], cols[1], std::stod(cols[2]), std::stod(cols[3]), cols[4], parse_feature(cols[5])});
        } catch (const std::invalid_argument&) {
            throw Error(ErrorCode::ValidationFailed, "gazetteer line " + std::to_string(line_no) + ": bad coordinate");
        }
    }
    return g;
}

void Gazetteer::add(GazetteerEntry e) {
    if (!(e.lat >= -90 && e.lat <= 90) || !(e.lon >= -180 && e.lon <= 180))
        throw Error(ErrorCode::ValidationFailed, "coordinates out of range for " + e.display_name);
    e.name = text::normalize_phrase(e.name);
    if (e.name.empty()) throw Error(ErrorCode::ValidationFailed, "empty gazetteer name");
    if (e.display_name.empty()) e.display_name = e.name;
    for (const auto& other : entries_)
        if (other.name == e.name && other.country == e.country && other.lat == e.lat && other.lon == e.lon)
            throw Error(ErrorCode::ValidationFailed, "duplicate gazetteer entry " + e.display_name);
    const auto shadow = text::strip_accents(e.name);
    longest_ = std::max<std::size_t>(longest_, static_cast<std::size_t>(std::count(e.name.begin(), e.name.end(), ' ')) + 1);
    by_shadow_.emplace(shadow, entries_.size());
    entries_.push_back(std::move(e));
}

std::vector<GazetteerEntry> Gazetteer::resolve(std::string_view name) const {
    const auto key = text::strip_accents(text::normalize_phrase(name));
    std::vector<GazetteerEntry> out;
    auto [lo, hi] = by_shadow_.equal_range(key);
    for (auto it = lo; it != hi; ++it) out.push_back(entries_[it->second]);
    return rank_candidates(std::move(out), {});
}

bool Gazetteer::contains(std::string_view normalized_name) const {
    return by_shadow_.contains(text::strip_accents(normalized_name));
}

}  // namespace hemeroteca::geo
