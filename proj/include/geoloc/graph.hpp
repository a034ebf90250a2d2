#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace geoloc {

using UserId = std::uint64_t;

/// Directed follow relation: follower -> followee.
struct Edge {
    UserId follower;
    UserId followee;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct GraphStats {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double avg_in_degree = 0.0;
    double avg_out_degree = 0.0;
    /// Mean |mutual_followers(u)| over all nodes.
    double mutual_edge_user_avg = 0.0;
    /// Nodes with zero in-degree and zero out-degree.
    std::size_t isolated_count = 0;
};

/// Simple directed graph over a fixed node set, CSR adjacency in both
/// directions. External user ids are remapped to dense indices 0..n-1
/// (ascending id order); adjacency rows are sorted. Immutable after build,
/// safe for concurrent reads.
class SocialGraph {
public:
    using NodeIndex = std::uint32_t;

    /// Builds the graph on exactly `located_users` (deduplicated). Edges with
    /// an endpoint outside that set, self-loops, and duplicates are dropped.
    /// Throws ValidationError("empty node set") when located_users is empty.
    static SocialGraph build(std::span<const Edge> raw_edges,
                             std::span<const UserId> located_users);

    std::size_t node_count() const { return users_.size(); }
    std::size_t edge_count() const { return out_targets_.size(); }

    /// External ids in ascending order; position == internal index.
    std::span<const UserId> users() const { return users_; }

    std::optional<NodeIndex> index_of(UserId user) const;
    UserId user_at(NodeIndex i) const { return users_[i]; }

    std::span<const NodeIndex> out_neighbors(NodeIndex u) const {
        return {out_targets_.data() + out_offsets_[u], out_targets_.data() + out_offsets_[u + 1]};
    }
    std::span<const NodeIndex> in_neighbors(NodeIndex u) const {
        return {in_targets_.data() + in_offsets_[u], in_targets_.data() + in_offsets_[u + 1]};
    }

    std::size_t out_degree(NodeIndex u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
    std::size_t in_degree(NodeIndex u) const { return in_offsets_[u + 1] - in_offsets_[u]; }

    bool has_edge(NodeIndex from, NodeIndex to) const;

    /// Sorted internal indices v with both u->v and v->u present.
    std::vector<NodeIndex> mutual_neighbors(NodeIndex u) const;

    /// All edges as external-id pairs, sorted by (follower, followee).
    std::vector<Edge> edge_list() const;

    /// Versioned little-endian binary format; save/load round-trips
    /// bit-exactly. See save() implementation for the layout.
    void save(const std::filesystem::path& path) const;
    static SocialGraph load(const std::filesystem::path& path);

    /// Checks all structural invariants (sorted rows, no self-loops,
    /// in == transpose(out)); throws ValidationError on the first violation.
    void validate() const;

private:
    std::vector<UserId> users_;
    std::vector<std::uint64_t> out_offsets_; // n+1
    std::vector<NodeIndex> out_targets_;     // sorted within each row
    std::vector<std::uint64_t> in_offsets_;
    std::vector<NodeIndex> in_targets_;

    void build_in_adjacency();
};

/// Free-function operations over external user ids.
SocialGraph build_graph(std::span<const Edge> raw_edges, std::span<const UserId> located_users);

/// Throws ValidationError("unknown user ...") when u is not a node.
std::vector<UserId> mutual_followers(const SocialGraph& g, UserId u);

GraphStats graph_stats(const SocialGraph& g);

/// Edge-list text format: one `follower<TAB>followee` per line, `#` comments
/// and blank lines ignored.
std::vector<Edge> read_edge_list(const std::filesystem::path& path);
void write_edge_list(std::span<const Edge> edges, const std::filesystem::path& path);

} // namespace geoloc
