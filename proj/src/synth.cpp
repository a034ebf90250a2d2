#include "geoloc/synth.hpp"

#include <cstdio>
#include <string>

#include "geoloc/errors.hpp"
#include "geoloc/rng.hpp"
#include "geoloc/util.hpp"

namespace geoloc {

namespace {

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError(std::string(what) + " must be in [0, 1], got " + format_double(p));
}

// Fixed-width zero-padded city names so lexicographic order equals numeric
// order (the estimator tie-break depends on city_id order).
std::string city_name(std::uint32_t index, std::uint32_t count) {
    int width = 3;
    for (std::uint32_t limit = 1000; count > limit; limit *= 10) ++width;
    char buf[24];
    std::snprintf(buf, sizeof(buf), "c%0*u", width, index);
    return std::string(buf);
}

} // namespace

// Draw order, per unordered pair (u, v) with u < v, u ascending then v
// ascending: one uniform for edge presence; if present, one uniform for
// reciprocity; if not mutual, one uniform for direction.
SynthData planted_partition(const PlantedPartitionParams& params) {
    if (params.communities < 2) throw ValidationError("communities must be >= 2");
    if (params.size < 2) throw ValidationError("community size must be >= 2");
    check_probability(params.p_in, "p_in");
    check_probability(params.p_out, "p_out");
    check_probability(params.reciprocity, "reciprocity");
    if (params.p_in < params.p_out)
        throw ValidationError("p_in must be >= p_out");

    const std::uint64_t n =
        static_cast<std::uint64_t>(params.communities) * static_cast<std::uint64_t>(params.size);
    Rng rng(params.seed);

    SynthData data;
    for (std::uint64_t u = 0; u < n; ++u) {
        const auto community = static_cast<std::uint32_t>(u / params.size);
        data.homes.assign(u, city_name(community, params.communities));
    }
    for (std::uint64_t u = 0; u + 1 < n; ++u) {
        const std::uint64_t community_u = u / params.size;
        for (std::uint64_t v = u + 1; v < n; ++v) {
            const double p = community_u == v / params.size ? params.p_in : params.p_out;
            if (!rng.bernoulli(p)) continue;
            if (rng.bernoulli(params.reciprocity)) {
                data.edges.push_back({u, v});
                data.edges.push_back({v, u});
            } else if (rng.bernoulli(0.5)) {
                data.edges.push_back({u, v});
            } else {
                data.edges.push_back({v, u});
            }
        }
    }
    return data;
}

// Node ids: celebrities 0..celebrities-1, then fans; fan f of city c has id
// celebrities + c * fans_per_city + f. Draw order per fan, ascending id:
// local_mutual_degree repeated uniform picks among same-city fans (re-drawn
// while the pick equals the fan itself), then a partial Fisher-Yates over
// the celebrity ids, then one followback uniform per followed celebrity.
SynthData celebrity_graph(const CelebrityGraphParams& params) {
    if (params.cities == 0) throw ValidationError("cities must be >= 1");
    if (params.fan_follow_celebs > params.celebrities)
        throw ValidationError("fan_follow_celebs must be <= celebrities");
    check_probability(params.celeb_followback, "celeb_followback");
    const std::uint64_t fan_count =
        static_cast<std::uint64_t>(params.cities) * static_cast<std::uint64_t>(params.fans_per_city);
    const std::uint64_t n = fan_count + params.celebrities;
    if (n == 0) throw ValidationError("celebrity graph with zero nodes");
    if (params.local_mutual_degree > 0 && params.fans_per_city == 1)
        throw ValidationError("local_mutual_degree > 0 needs at least 2 fans per city");

    Rng rng(params.seed);
    SynthData data;

    for (std::uint32_t celeb = 0; celeb < params.celebrities; ++celeb)
        data.homes.assign(celeb, city_name(celeb % params.cities, params.cities));
    for (std::uint64_t f = 0; f < fan_count; ++f) {
        const auto city = static_cast<std::uint32_t>(f / params.fans_per_city);
        data.homes.assign(params.celebrities + f, city_name(city, params.cities));
    }

    for (std::uint64_t f = 0; f < fan_count; ++f) {
        const UserId fan = params.celebrities + f;
        const std::uint64_t city_base =
            params.celebrities + (f / params.fans_per_city) * params.fans_per_city;
        for (std::uint32_t k = 0; k < params.local_mutual_degree; ++k) {
            UserId friend_id = fan;
            while (friend_id == fan)
                friend_id = city_base + rng.next_below(params.fans_per_city);
            data.edges.push_back({fan, friend_id});
            data.edges.push_back({friend_id, fan});
        }
        if (params.fan_follow_celebs > 0) {
            const auto picks = rng.sample_distinct(params.celebrities, params.fan_follow_celebs);
            for (const std::uint32_t celeb : picks) {
                data.edges.push_back({fan, celeb});
                if (rng.bernoulli(params.celeb_followback)) data.edges.push_back({celeb, fan});
            }
        }
    }
    return data;
}

} // namespace geoloc
