#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoloc/graph.hpp"
#include "geoloc/home_table.hpp"

namespace geoloc {

enum class EstimationOutcome { easy, hard, unknown };

std::string_view to_string(EstimationOutcome outcome);

struct EstimationResult {
    UserId user;
    std::optional<std::string> predicted;
    std::string truth;
    EstimationOutcome outcome;
};

/// Disjoint user groups; the union is the full node set. Sorted ascending.
struct GroupPartition {
    std::vector<UserId> easy;
    std::vector<UserId> hard;
    std::vector<UserId> unknown;
};

struct Classification {
    GroupPartition partition;
    std::vector<EstimationResult> results; // aligned to graph node order
};

/// Modal home city over mutual_followers(u); ties break to the
/// lexicographically smallest city_id; nullopt when no mutual follower has a
/// known home. The target's own label is never consulted (leave-one-out).
/// Throws ValidationError("unknown user ...") when u is not a node.
std::optional<std::string> estimate_location(const SocialGraph& g, const HomeLocationTable& homes,
                                             UserId u);

/// Applies estimate_location to every node and partitions by outcome:
/// easy = predicted == truth, hard = predicted != truth, unknown = no
/// prediction. Requires a home for every node.
Classification classify_users(const SocialGraph& g, const HomeLocationTable& homes);

/// Results text: `user_id<TAB>truth<TAB>predicted_or_-<TAB>outcome`.
void write_results(const Classification& c, const std::filesystem::path& path);

/// Summary JSON: {"easy": ..., "hard": ..., "unknown": ..., "total": ...}.
void write_partition_summary(const Classification& c, const std::filesystem::path& path);

} // namespace geoloc
