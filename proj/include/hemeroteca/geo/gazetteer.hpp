#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace hemeroteca::geo {

inline constexpr double kEarthRadiusKm = 6371.0;

struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Great-circle distance on a sphere of radius 6371 km (haversine form).
double distance_km(GeoPoint a, GeoPoint b) noexcept;

/// Normalized mean of the points' unit vectors; nullopt when empty or when
/// the vectors cancel out.
std::optional<GeoPoint> spherical_centroid(const std::vector<GeoPoint>& points);

enum class FeatureKind { City, Town, Village, Region, River, Other };

std::string_view feature_name(FeatureKind kind) noexcept;
FeatureKind parse_feature(std::string_view name);

struct GazetteerEntry {
    std::string name;          // normalized
    std::string display_name;
    double lat = 0.0;
    double lon = 0.0;
    std::string country;
    FeatureKind feature = FeatureKind::Other;

    GeoPoint point() const { return {lat, lon}; }
    friend bool operator==(const GazetteerEntry&, const GazetteerEntry&) = default;
};

nlohmann::json to_json(const GazetteerEntry& e);
GazetteerEntry gazetteer_entry_from_json(const nlohmann::json& j);

struct RankContext {
    std::optional<std::string> newspaper_country;
    std::vector<GeoPoint> nearby_confirmed_points;
};

/// Orders candidates: newspaper's country first, then nearest to the
/// centroid of confirmed points, then feature importance
/// (city > town > village > region > river > other), then lexicographic.
/// Never filters or duplicates.
std::vector<GazetteerEntry> rank_candidates(std::vector<GazetteerEntry> candidates, const RankContext& context);

/// Place-name table. Read-only after load, so it can be shared freely.
class Gazetteer {
public:
    /// Tab-separated with header: name, display_name, lat, lon, country, feature.
    static Gazetteer load(const std::string& path);
    static Gazetteer parse(std::istream& in);

    /// Throws Error(ValidationFailed) for out-of-range coordinates or a
    /// duplicate (name, country, lat, lon).
    void add(GazetteerEntry entry);

    /// Case- and accent-insensitive lookup, ranked with an empty context.
    std::vector<GazetteerEntry> resolve(std::string_view name) const;

    /// True when a normalized (possibly multi-word) name is known.
    bool contains(std::string_view normalized_name) const;
    std::size_t longest_name_words() const { return longest_; }

    const std::vector<GazetteerEntry>& entries() const { return entries_; }

private:
    std::vector<GazetteerEntry> entries_;
    std::multimap<std::string, std::size_t> by_shadow_;
    std::size_t longest_ = 1;
};

}  // namespace hemeroteca::geo
