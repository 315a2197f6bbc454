#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hemeroteca/corpus/article.hpp"
#include "hemeroteca/events/event.hpp"
#include "hemeroteca/query/rules.hpp"

namespace hemeroteca::vocab {
class Vocabulary;
}

namespace hemeroteca::events {

struct BBox {
    double min_lat = -90.0;
    double min_lon = -180.0;
    double max_lat = 90.0;
    double max_lon = 180.0;

    /// Throws Error(ValidationFailed) for inverted or out-of-range bounds.
    void validate() const;
    bool contains(geo::GeoPoint p) const noexcept {
        return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
    }
    /// "min_lat,min_lon,max_lat,max_lon".
    static BBox parse(std::string_view text);
    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Latin America: lon [-120, -30], lat [-60, 35].
inline constexpr BBox kLatinAmerica{-60.0, -120.0, 35.0, -30.0};
inline constexpr double kDefaultCellDeg = 1.0;
/// Time window of the heat map when the caller gives none.
inline constexpr int kHeatmapFirstYear = 1890;
inline constexpr int kHeatmapLastYear = 1900;
/// "The last years of the nineteenth century".
DateRange late_nineteenth_century();

/// Conjunctive event filter; unset fields match everything.
struct EventFilter {
    std::optional<std::string> country;
    std::optional<BBox> bbox;
    std::optional<geo::GeoPoint> center;
    std::optional<double> radius_km;
    std::optional<DateRange> time_range;
    std::optional<std::string> name;
    std::optional<std::string> damage_term;

    /// Throws Error(ValidationFailed): malformed bbox, radius without
    /// center, negative radius.
    void validate() const;
    bool matches(const ClimateEvent& e) const;
};

/// Matching events ordered by start of time span, then id.
std::vector<ClimateEvent> query_events(std::span<const ClimateEvent> events, const EventFilter& filter);

/// Events with the most linked articles; ties by earlier date, then id.
std::vector<std::pair<ClimateEvent, std::size_t>> most_reported(std::span<const ClimateEvent> events,
                                                                 const EventFilter& filter, std::size_t k);

struct HeatmapGrid {
    BBox bbox = kLatinAmerica;
    double cell_deg = kDefaultCellDeg;
    std::map<std::pair<int, int>, std::uint32_t> cells;  // (row, col) -> count

    int rows() const;
    int cols() const;
    std::uint64_t total() const;
    /// Cell holding the point; points on the upper edges fall in the last
    /// row/column. nullopt outside the bbox.
    std::optional<std::pair<int, int>> cell_of(geo::GeoPoint p) const;
    friend bool operator==(const HeatmapGrid&, const HeatmapGrid&) = default;
};

/// Each event adds one to every distinct cell holding at least one of its
/// scope points. Parallel over events (OpenMP).
HeatmapGrid heatmap(std::span<const ClimateEvent> events, double cell_deg = kDefaultCellDeg,
                    const BBox& bbox = kLatinAmerica);
HeatmapGrid heatmap_serial(std::span<const ClimateEvent> events, double cell_deg = kDefaultCellDeg,
                           const BBox& bbox = kLatinAmerica);

/// Row-major feature collection of cell polygons with count properties.
nlohmann::json export_heatmap(const HeatmapGrid& grid);

/// "jsonl" (one event record per line) or "geojson"; events sorted by id.
/// Throws Error(ValidationFailed) for other format names.
std::string export_events(std::span<const ClimateEvent> events, std::string_view format);
/// Reads the "jsonl" export back.
std::vector<ClimateEvent> import_events(std::string_view jsonl);

/// Consecutive year buckets [first, first+width-1], ... covering last.
std::vector<DateRange> year_buckets(int first_year, int last_year, int width);

struct EvolutionSeries {
    std::string country;
    std::vector<std::string> terms;                       // concept term plus local equivalents
    std::vector<std::uint64_t> totals;                    // per bucket
    std::map<std::string, std::vector<std::uint64_t>> per_term;
};

struct TermEvolution {
    std::string concept_term;
    std::vector<DateRange> buckets;
    std::vector<EvolutionSeries> series;
};

/// Occurrences of the concept term and its cultural equivalents, per bucket
/// and per country, over the articles of that country published in the
/// bucket. Countries default to the vocabulary's supported set.
TermEvolution term_evolution(std::span<const corpus::Article> articles, const vocab::Vocabulary& vocab,
                             std::string_view concept_term, const std::vector<DateRange>& buckets,
                             std::vector<std::string> countries = {});
nlohmann::json to_json(const TermEvolution& evo);

/// Fills missing attributes from rules whose trigger matches one of the
/// event's terms or damages. Reported and existing values are kept; reach
/// implications describe query geography, not the event, and are skipped.
ClimateEvent infer_attributes(ClimateEvent event, std::span<const query::DomainRule> rules);

}  // namespace hemeroteca::events
