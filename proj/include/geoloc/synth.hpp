#pragma once

#include <cstdint>
#include <vector>

#include "geoloc/graph.hpp"
#include "geoloc/home_table.hpp"

namespace geoloc {

/// Communities of equal size; each community is one city. Within-community
/// pairs get an edge with probability p_in, cross-community pairs with
/// p_out; a drawn edge becomes mutual with probability `reciprocity`, else a
/// single direction is chosen uniformly.
struct PlantedPartitionParams {
    std::uint32_t communities = 2; // >= 2
    std::uint32_t size = 2;        // >= 2
    double p_in = 0.5;
    double p_out = 0.05; // <= p_in
    double reciprocity = 1.0;
    std::uint64_t seed = 0;
};

/// Celebrities are assigned to cities round-robin; each fan mutually
/// befriends local_mutual_degree same-city fans and follows
/// fan_follow_celebs distinct celebrities sampled uniformly across all
/// cities, each of whom follows back with probability celeb_followback.
struct CelebrityGraphParams {
    std::uint32_t cities = 3;
    std::uint32_t fans_per_city = 10;
    std::uint32_t celebrities = 3;
    std::uint32_t fan_follow_celebs = 1; // <= celebrities
    std::uint32_t local_mutual_degree = 2;
    double celeb_followback = 0.0;
    std::uint64_t seed = 0;
};

/// Raw generator output in the same shape the file formats carry. Mutual
/// edges appear as two explicit directed edges; build_graph(edges,
/// homes.users()) reconstructs the graph downstream code consumes.
struct SynthData {
    std::vector<Edge> edges;
    HomeLocationTable homes;
};

/// Both generators are deterministic for a fixed seed (see rng.hpp for the
/// pinned generator); the RNG draw order is documented in the
/// implementation so other-language ports can reproduce instances exactly.
SynthData planted_partition(const PlantedPartitionParams& params);
SynthData celebrity_graph(const CelebrityGraphParams& params);

} // namespace geoloc
