#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoloc/graph.hpp"

namespace geoloc {

enum class CentralityKind { in_degree, out_degree, pagerank, hits_authority, hits_hub };

inline constexpr CentralityKind kAllCentralityKinds[] = {
    CentralityKind::in_degree, CentralityKind::out_degree, CentralityKind::pagerank,
    CentralityKind::hits_authority, CentralityKind::hits_hub};

std::string_view to_string(CentralityKind kind);
std::optional<CentralityKind> centrality_kind_from_string(std::string_view name);

struct IterationParams {
    double damping = 0.85;     // PageRank teleport complement, in (0, 1)
    double tolerance = 1e-9;   // PageRank: L1 change; HITS: max per-node change
    int max_iterations = 1000;

    void validate() const;
};

/// Per-node scores aligned to graph node order, plus iteration metadata
/// (zero for the degree kinds).
struct CentralityScores {
    CentralityKind kind;
    std::vector<double> values;
    int iterations = 0;
    double residual = 0.0;
};

enum class Direction { in, out };

/// Raw follower (in) or followee (out) counts, unnormalized.
CentralityScores degree_scores(const SocialGraph& g, Direction direction);

/// Damped random-surfer power iteration. Dangling mass is redistributed
/// uniformly over all nodes; initialization is uniform 1/n; converged when
/// the L1 change of an iteration drops below params.tolerance. The returned
/// values sum to 1. Throws ConvergenceError when max_iterations is exhausted.
CentralityScores pagerank(const SocialGraph& g, const IterationParams& params = {});

struct HitsScores {
    CentralityScores authority;
    CentralityScores hub;
};

/// Alternating authority/hub updates with L1 normalization each sweep,
/// uniform initialization, convergence on max per-node change across both
/// vectors. A graph with zero edges yields uniform 1/n for both (degenerate
/// convention). Throws ConvergenceError on failure to converge.
HitsScores hits(const SocialGraph& g, const IterationParams& params = {});

/// Score file: `user_id<TAB>score` in node order, shortest round-trip
/// decimals, plus a JSON sidecar at `<path>.json` carrying kind, params,
/// iterations, residual, and the digest of the graph file the scores were
/// computed from.
void write_scores(const SocialGraph& g, const CentralityScores& scores,
                  const std::filesystem::path& path, const std::string& graph_digest,
                  const std::optional<IterationParams>& params = std::nullopt);

struct LoadedScores {
    CentralityScores scores;
    std::string graph_digest;
};

/// Validates that the score rows align one-to-one with the graph's node
/// order and that the sidecar is present and well formed.
LoadedScores read_scores(const SocialGraph& g, const std::filesystem::path& path);

} // namespace geoloc
