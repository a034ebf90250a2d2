#pragma once

#include "geoloc/centrality.hpp"
#include "geoloc/estimator.hpp"
#include "geoloc/graph.hpp"
#include "geoloc/home_table.hpp"

// Serial reference implementations of the parallel kernels: the same
// arithmetic, executed on one thread with no OpenMP. Kept for tests and the
// benchmark target; outputs are bit-identical to the parallel versions.
namespace geoloc::serial {

CentralityScores degree_scores(const SocialGraph& g, Direction direction);
CentralityScores pagerank(const SocialGraph& g, const IterationParams& params = {});
HitsScores hits(const SocialGraph& g, const IterationParams& params = {});
Classification classify_users(const SocialGraph& g, const HomeLocationTable& homes);

} // namespace geoloc::serial
