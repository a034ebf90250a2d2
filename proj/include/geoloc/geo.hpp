#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoloc/graph.hpp"
#include "geoloc/home_table.hpp"

namespace geoloc {

struct GeoPost {
    UserId user;
    double lat; // degrees, [-90, 90]
    double lon; // degrees, [-180, 180]
};

struct LatLon {
    double lat;
    double lon;
};

/// One named region: a set of closed polygon rings (outer rings and holes
/// alike; containment is decided by the even-odd rule across all rings).
struct RegionDef {
    std::string city_id;
    std::vector<std::vector<LatLon>> rings;
};

/// Immutable set of city regions, sorted by city_id. Rings are normalized so
/// the first vertex equals the last; degenerate rings (fewer than 3 distinct
/// vertices) are rejected at load time.
class RegionSet {
public:
    static RegionSet make(std::vector<RegionDef> defs);

    /// Minimal GeoJSON subset: a FeatureCollection of Polygon / MultiPolygon
    /// features, each with a string property `city_id`. Coordinates are
    /// `[lon, lat]` pairs per the GeoJSON convention.
    static RegionSet load_geojson(const std::filesystem::path& path);
    static RegionSet parse_geojson(const std::string& text);

    std::size_t size() const { return regions_.size(); }
    const std::string& city_id(std::size_t i) const { return regions_[i].def.city_id; }

    /// Index of the containing region (even-odd ray casting, bounding-box
    /// pre-filter); regions are tested in city_id order so the smallest
    /// city_id wins if polygons overlap.
    std::optional<std::size_t> locate_index(double lat, double lon) const;

private:
    struct Prepared {
        RegionDef def;
        double min_lat, max_lat, min_lon, max_lon;
    };
    std::vector<Prepared> regions_;
};

/// City containing the point, or nullopt when no region contains it.
std::optional<std::string> locate_point(const RegionSet& regions, double lat, double lon);

/// Counts each user's posts per containing city (posts outside every region
/// are discarded) and assigns the modal city when its count reaches
/// min_posts; ties break to the lexicographically smallest city_id.
HomeLocationTable assign_home_locations(std::span<const GeoPost> posts, const RegionSet& regions,
                                        int min_posts = 6);

/// Posts text format: `user_id<TAB>lat<TAB>lon` per line, `#` comments and
/// blank lines ignored.
std::vector<GeoPost> read_posts(const std::filesystem::path& path);
void write_posts(std::span<const GeoPost> posts, const std::filesystem::path& path);

} // namespace geoloc
