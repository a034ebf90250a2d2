#include "geoloc/geo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geoloc/errors.hpp"
#include "geoloc/util.hpp"

namespace geoloc {

namespace {

void check_lat_lon(double lat, double lon, const std::string& context) {
    if (!(lat >= -90.0 && lat <= 90.0))
        throw ValidationError(context + ": latitude out of range: " + format_double(lat));
    if (!(lon >= -180.0 && lon <= 180.0))
        throw ValidationError(context + ": longitude out of range: " + format_double(lon));
}

// Even-odd ray casting: horizontal ray toward +lon. Behavior for points
// exactly on a boundary is unspecified.
bool ring_crossings_odd(const std::vector<LatLon>& ring, double lat, double lon) {
    bool inside = false;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const LatLon& a = ring[i];
        const LatLon& b = ring[i + 1];
        if ((a.lat > lat) != (b.lat > lat)) {
            const double cross_lon = a.lon + (lat - a.lat) / (b.lat - a.lat) * (b.lon - a.lon);
            if (lon < cross_lon) inside = !inside;
        }
    }
    return inside;
}

std::vector<LatLon> normalize_ring(std::vector<LatLon> ring, const std::string& context) {
    if (!ring.empty() &&
        (ring.front().lat != ring.back().lat || ring.front().lon != ring.back().lon)) {
        ring.push_back(ring.front());
    }
    std::set<std::pair<double, double>> distinct;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) distinct.insert({ring[i].lat, ring[i].lon});
    if (distinct.size() < 3)
        throw ValidationError(context + ": degenerate ring (fewer than 3 distinct vertices)");
    for (const LatLon& p : ring) check_lat_lon(p.lat, p.lon, context);
    return ring;
}

} // namespace

RegionSet RegionSet::make(std::vector<RegionDef> defs) {
    RegionSet set;
    std::set<std::string> seen;
    for (RegionDef& def : defs) {
        if (def.city_id.empty()) throw ValidationError("region with empty city_id");
        if (!seen.insert(def.city_id).second)
            throw ValidationError("duplicate city_id: " + def.city_id);
        if (def.rings.empty())
            throw ValidationError("region " + def.city_id + " has no rings");
        Prepared prep;
        prep.min_lat = prep.min_lon = std::numeric_limits<double>::infinity();
        prep.max_lat = prep.max_lon = -std::numeric_limits<double>::infinity();
        for (auto& ring : def.rings) {
            ring = normalize_ring(std::move(ring), "region " + def.city_id);
            for (const LatLon& p : ring) {
                prep.min_lat = std::min(prep.min_lat, p.lat);
                prep.max_lat = std::max(prep.max_lat, p.lat);
                prep.min_lon = std::min(prep.min_lon, p.lon);
                prep.max_lon = std::max(prep.max_lon, p.lon);
            }
        }
        prep.def = std::move(def);
        set.regions_.push_back(std::move(prep));
    }
    std::sort(set.regions_.begin(), set.regions_.end(),
              [](const Prepared& a, const Prepared& b) { return a.def.city_id < b.def.city_id; });
    return set;
}

std::optional<std::size_t> RegionSet::locate_index(double lat, double lon) const {
    for (std::size_t i = 0; i < regions_.size(); ++i) {
        const Prepared& region = regions_[i];
        if (lat < region.min_lat || lat > region.max_lat || lon < region.min_lon ||
            lon > region.max_lon)
            continue;
        bool inside = false;
        for (const auto& ring : region.def.rings)
            if (ring_crossings_odd(ring, lat, lon)) inside = !inside;
        if (inside) return i;
    }
    return std::nullopt;
}

namespace {

using nlohmann::json;

std::vector<LatLon> parse_ring(const json& coords, const std::string& context) {
    if (!coords.is_array()) throw ValidationError(context + ": ring is not an array");
    std::vector<LatLon> ring;
    ring.reserve(coords.size());
    for (const auto& pt : coords) {
        if (!pt.is_array() || pt.size() < 2 || !pt[0].is_number() || !pt[1].is_number())
            throw ValidationError(context + ": vertex is not a [lon, lat] pair");
        ring.push_back({pt[1].get<double>(), pt[0].get<double>()});
    }
    return ring;
}

} // namespace

RegionSet RegionSet::parse_geojson(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("invalid GeoJSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection")
        throw ValidationError("GeoJSON root must be a FeatureCollection");
    if (!doc.contains("features") || !doc["features"].is_array())
        throw ValidationError("FeatureCollection without a features array");

    std::vector<RegionDef> defs;
    for (const auto& feature : doc["features"]) {
        if (feature.value("type", "") != "Feature")
            throw ValidationError("features must have type 'Feature'");
        if (!feature.contains("properties") || !feature["properties"].is_object() ||
            !feature["properties"].contains("city_id") ||
            !feature["properties"]["city_id"].is_string())
            throw ValidationError("feature without a string 'city_id' property");
        RegionDef def;
        def.city_id = feature["properties"]["city_id"].get<std::string>();
        const std::string context = "region " + def.city_id;
        if (!feature.contains("geometry") || !feature["geometry"].is_object())
            throw ValidationError(context + ": feature without geometry");
        const auto& geometry = feature["geometry"];
        const std::string gtype = geometry.value("type", "");
        if (!geometry.contains("coordinates"))
            throw ValidationError(context + ": geometry without coordinates");
        const auto& coords = geometry["coordinates"];
        if (gtype == "Polygon") {
            for (const auto& ring : coords) def.rings.push_back(parse_ring(ring, context));
        } else if (gtype == "MultiPolygon") {
            for (const auto& polygon : coords)
                for (const auto& ring : polygon) def.rings.push_back(parse_ring(ring, context));
        } else {
            throw ValidationError(context + ": unsupported geometry type '" + gtype +
                                  "' (only Polygon and MultiPolygon are accepted)");
        }
        defs.push_back(std::move(def));
    }
    return make(std::move(defs));
}

RegionSet RegionSet::load_geojson(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_geojson(buf.str());
}

std::optional<std::string> locate_point(const RegionSet& regions, double lat, double lon) {
    check_lat_lon(lat, lon, "locate_point");
    const auto idx = regions.locate_index(lat, lon);
    if (!idx) return std::nullopt;
    return regions.city_id(*idx);
}

HomeLocationTable assign_home_locations(std::span<const GeoPost> posts, const RegionSet& regions,
                                        int min_posts) {
    if (min_posts < 1) throw ValidationError("min_posts must be >= 1");

    // Validate serially; exceptions must not escape the parallel region.
    for (const GeoPost& post : posts)
        check_lat_lon(post.lat, post.lon, "post of user " + std::to_string(post.user));

    // Region lookup per post, parallel; -1 marks posts outside every region.
    std::vector<std::int64_t> region_of(posts.size(), -1);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(posts.size()); ++i) {
        const GeoPost& post = posts[static_cast<std::size_t>(i)];
        const auto idx = regions.locate_index(post.lat, post.lon);
        if (idx) region_of[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(*idx);
    }

    // Counting is order-independent, so the result is invariant under any
    // permutation of the input posts.
    std::map<UserId, std::map<std::size_t, std::uint64_t>> counts;
    for (std::size_t i = 0; i < posts.size(); ++i) {
        if (region_of[i] < 0) continue;
        ++counts[posts[i].user][static_cast<std::size_t>(region_of[i])];
    }

    HomeLocationTable table;
    for (const auto& [user, per_region] : counts) {
        std::uint64_t best_count = 0;
        std::size_t best_region = 0;
        // Regions are ordered by city_id, so the first maximum is the
        // lexicographically smallest tie.
        for (const auto& [region, count] : per_region) {
            if (count > best_count) {
                best_count = count;
                best_region = region;
            }
        }
        if (best_count >= static_cast<std::uint64_t>(min_posts))
            table.assign(user, regions.city_id(best_region));
    }
    return table;
}

std::vector<GeoPost> read_posts(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    std::vector<GeoPost> posts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_tabs(text);
        if (fields.size() != 3)
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": expected 'user_id<TAB>lat<TAB>lon'");
        GeoPost post{parse_u64(fields[0], "user id"), parse_double(fields[1], "latitude"),
                     parse_double(fields[2], "longitude")};
        check_lat_lon(post.lat, post.lon, path.string() + ":" + std::to_string(lineno));
        posts.push_back(post);
    }
    return posts;
}

void write_posts(std::span<const GeoPost> posts, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    for (const GeoPost& post : posts)
        out << post.user << '\t' << format_double(post.lat) << '\t' << format_double(post.lon)
            << '\n';
    if (!out) throw ValidationError("write failed: " + path.string());
}

} // namespace geoloc
