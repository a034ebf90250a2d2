#include "geoloc/graph.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "geoloc/errors.hpp"
#include "geoloc/util.hpp"

static_assert(std::endian::native == std::endian::little,
              "graph binary format assumes a little-endian host");

namespace geoloc {

SocialGraph SocialGraph::build(std::span<const Edge> raw_edges,
                               std::span<const UserId> located_users) {
    if (located_users.empty()) throw ValidationError("empty node set");

    SocialGraph g;
    g.users_.assign(located_users.begin(), located_users.end());
    std::sort(g.users_.begin(), g.users_.end());
    g.users_.erase(std::unique(g.users_.begin(), g.users_.end()), g.users_.end());

    const std::size_t n = g.users_.size();

    // Map endpoints to internal indices, dropping self-loops and edges with
    // an unlocated endpoint.
    std::vector<std::pair<NodeIndex, NodeIndex>> edges;
    edges.reserve(raw_edges.size());
    for (const Edge& e : raw_edges) {
        if (e.follower == e.followee) continue;
        const auto from = g.index_of(e.follower);
        const auto to = g.index_of(e.followee);
        if (!from || !to) continue;
        edges.emplace_back(*from, *to);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    g.out_offsets_.assign(n + 1, 0);
    g.out_targets_.resize(edges.size());
    for (const auto& [from, to] : edges) ++g.out_offsets_[from + 1];
    for (std::size_t i = 0; i < n; ++i) g.out_offsets_[i + 1] += g.out_offsets_[i];
    for (std::size_t i = 0; i < edges.size(); ++i) g.out_targets_[i] = edges[i].second;

    g.build_in_adjacency();
    return g;
}

void SocialGraph::build_in_adjacency() {
    const std::size_t n = users_.size();
    in_offsets_.assign(n + 1, 0);
    in_targets_.resize(out_targets_.size());
    for (const NodeIndex to : out_targets_) ++in_offsets_[to + 1];
    for (std::size_t i = 0; i < n; ++i) in_offsets_[i + 1] += in_offsets_[i];
    // Source rows are visited in ascending order, so each in-row ends up
    // sorted without an extra pass.
    std::vector<std::uint64_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::uint64_t k = out_offsets_[u]; k < out_offsets_[u + 1]; ++k) {
            in_targets_[cursor[out_targets_[k]]++] = static_cast<NodeIndex>(u);
        }
    }
}

std::optional<SocialGraph::NodeIndex> SocialGraph::index_of(UserId user) const {
    const auto it = std::lower_bound(users_.begin(), users_.end(), user);
    if (it == users_.end() || *it != user) return std::nullopt;
    return static_cast<NodeIndex>(it - users_.begin());
}

bool SocialGraph::has_edge(NodeIndex from, NodeIndex to) const {
    const auto row = out_neighbors(from);
    return std::binary_search(row.begin(), row.end(), to);
}

std::vector<SocialGraph::NodeIndex> SocialGraph::mutual_neighbors(NodeIndex u) const {
    const auto out = out_neighbors(u);
    const auto in = in_neighbors(u);
    std::vector<NodeIndex> result;
    std::set_intersection(out.begin(), out.end(), in.begin(), in.end(),
                          std::back_inserter(result));
    return result;
}

std::vector<Edge> SocialGraph::edge_list() const {
    std::vector<Edge> edges;
    edges.reserve(edge_count());
    for (std::size_t u = 0; u < node_count(); ++u) {
        for (const NodeIndex v : out_neighbors(static_cast<NodeIndex>(u)))
            edges.push_back({users_[u], users_[v]});
    }
    return edges;
}

void SocialGraph::validate() const {
    const std::size_t n = users_.size();
    if (out_offsets_.size() != n + 1 || in_offsets_.size() != n + 1)
        throw ValidationError("graph: offset array size mismatch");
    if (!std::is_sorted(users_.begin(), users_.end()) ||
        std::adjacent_find(users_.begin(), users_.end()) != users_.end())
        throw ValidationError("graph: node ids not strictly ascending");
    if (out_offsets_.front() != 0 || out_offsets_.back() != out_targets_.size())
        throw ValidationError("graph: bad out offsets");
    if (in_offsets_.front() != 0 || in_offsets_.back() != in_targets_.size())
        throw ValidationError("graph: bad in offsets");
    if (in_targets_.size() != out_targets_.size())
        throw ValidationError("graph: in/out edge count mismatch");

    std::size_t checked_in_edges = 0;
    for (std::size_t u = 0; u < n; ++u) {
        const auto row = out_neighbors(static_cast<NodeIndex>(u));
        if (!std::is_sorted(row.begin(), row.end()) ||
            std::adjacent_find(row.begin(), row.end()) != row.end())
            throw ValidationError("graph: out row not sorted-unique at node " +
                                  std::to_string(users_[u]));
        for (const NodeIndex v : row) {
            if (v >= n) throw ValidationError("graph: edge target out of range");
            if (v == u) throw ValidationError("graph: self-loop at node " +
                                              std::to_string(users_[u]));
        }
        const auto in_row = in_neighbors(static_cast<NodeIndex>(u));
        if (!std::is_sorted(in_row.begin(), in_row.end()) ||
            std::adjacent_find(in_row.begin(), in_row.end()) != in_row.end())
            throw ValidationError("graph: in row not sorted-unique at node " +
                                  std::to_string(users_[u]));
        for (const NodeIndex v : in_row) {
            if (v >= n) throw ValidationError("graph: in-edge source out of range");
            if (!has_edge(v, static_cast<NodeIndex>(u)))
                throw ValidationError("graph: in-adjacency not the transpose of out-adjacency");
            ++checked_in_edges;
        }
    }
    if (checked_in_edges != out_targets_.size())
        throw ValidationError("graph: in-adjacency not the transpose of out-adjacency");
}

namespace {

constexpr char kGraphMagic[8] = {'G', 'L', 'G', 'R', 'A', 'P', 'H', '1'};

template <class T>
void write_raw(std::ofstream& out, Fnv1a64& digest, const T* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
    digest.update(data, count * sizeof(T));
}

template <class T>
void read_raw(std::ifstream& in, Fnv1a64& digest, T* data, std::size_t count) {
    in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
    if (static_cast<std::size_t>(in.gcount()) != count * sizeof(T))
        throw ValidationError("graph file truncated");
    digest.update(data, count * sizeof(T));
}

} // namespace

// Layout (all integers little-endian):
//   magic "GLGRAPH1" | u64 node_count | u64 edge_count
//   u64 user_id[node_count]            ascending
//   u64 out_offset[node_count + 1]
//   u32 out_target[edge_count]         internal indices, sorted per row
//   u64 fnv1a64 of all preceding bytes
void SocialGraph::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    Fnv1a64 digest;
    const std::uint64_t n = users_.size();
    const std::uint64_t m = out_targets_.size();
    write_raw(out, digest, kGraphMagic, sizeof(kGraphMagic));
    write_raw(out, digest, &n, 1);
    write_raw(out, digest, &m, 1);
    write_raw(out, digest, users_.data(), users_.size());
    write_raw(out, digest, out_offsets_.data(), out_offsets_.size());
    write_raw(out, digest, out_targets_.data(), out_targets_.size());
    const std::uint64_t checksum = digest.value();
    out.write(reinterpret_cast<const char*>(&checksum), sizeof(checksum));
    if (!out) throw ValidationError("write failed: " + path.string());
}

SocialGraph SocialGraph::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    Fnv1a64 digest;
    char magic[sizeof(kGraphMagic)];
    read_raw(in, digest, magic, sizeof(magic));
    if (std::memcmp(magic, kGraphMagic, sizeof(magic)) != 0)
        throw ValidationError("not a graph file (bad magic): " + path.string());
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    read_raw(in, digest, &n, 1);
    read_raw(in, digest, &m, 1);

    SocialGraph g;
    g.users_.resize(n);
    g.out_offsets_.resize(n + 1);
    g.out_targets_.resize(m);
    read_raw(in, digest, g.users_.data(), g.users_.size());
    read_raw(in, digest, g.out_offsets_.data(), g.out_offsets_.size());
    read_raw(in, digest, g.out_targets_.data(), g.out_targets_.size());

    std::uint64_t checksum = 0;
    in.read(reinterpret_cast<char*>(&checksum), sizeof(checksum));
    if (static_cast<std::size_t>(in.gcount()) != sizeof(checksum))
        throw ValidationError("graph file truncated");
    if (checksum != digest.value())
        throw ValidationError("graph file checksum mismatch: " + path.string());

    g.build_in_adjacency();
    g.validate();
    return g;
}

SocialGraph build_graph(std::span<const Edge> raw_edges, std::span<const UserId> located_users) {
    return SocialGraph::build(raw_edges, located_users);
}

std::vector<UserId> mutual_followers(const SocialGraph& g, UserId u) {
    const auto idx = g.index_of(u);
    if (!idx) throw ValidationError("unknown user " + std::to_string(u));
    std::vector<UserId> out;
    for (const auto v : g.mutual_neighbors(*idx)) out.push_back(g.user_at(v));
    return out;
}

GraphStats graph_stats(const SocialGraph& g) {
    GraphStats s;
    s.node_count = g.node_count();
    s.edge_count = g.edge_count();
    if (s.node_count > 0) {
        s.avg_in_degree = static_cast<double>(s.edge_count) / static_cast<double>(s.node_count);
        s.avg_out_degree = s.avg_in_degree;
    }
    const std::size_t n = g.node_count();
    std::size_t isolated = 0;
    std::uint64_t mutual_total = 0;
#pragma omp parallel for schedule(static) reduction(+ : isolated, mutual_total)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const auto u = static_cast<SocialGraph::NodeIndex>(i);
        if (g.out_degree(u) == 0 && g.in_degree(u) == 0) ++isolated;
        mutual_total += g.mutual_neighbors(u).size();
    }
    s.isolated_count = isolated;
    if (n > 0) s.mutual_edge_user_avg = static_cast<double>(mutual_total) / static_cast<double>(n);
    return s;
}

std::vector<Edge> read_edge_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());
    std::vector<Edge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_tabs(text);
        if (fields.size() != 2)
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": expected 'follower<TAB>followee'");
        edges.push_back({parse_u64(fields[0], "follower id"), parse_u64(fields[1], "followee id")});
    }
    return edges;
}

void write_edge_list(std::span<const Edge> edges, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    for (const Edge& e : edges)
        out << e.follower << '\t' << e.followee << '\n';
    if (!out) throw ValidationError("write failed: " + path.string());
}

} // namespace geoloc
