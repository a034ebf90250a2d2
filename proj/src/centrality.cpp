#include "geoloc/centrality.hpp"

#include <cmath>
#include <fstream>
#include <utility>

#include <json.hpp>

#include "geoloc/errors.hpp"
#include "geoloc/util.hpp"

namespace geoloc {

std::string_view to_string(CentralityKind kind) {
    switch (kind) {
        case CentralityKind::in_degree: return "in_degree";
        case CentralityKind::out_degree: return "out_degree";
        case CentralityKind::pagerank: return "pagerank";
        case CentralityKind::hits_authority: return "hits_authority";
        case CentralityKind::hits_hub: return "hits_hub";
    }
    return "unknown";
}

std::optional<CentralityKind> centrality_kind_from_string(std::string_view name) {
    for (const CentralityKind kind : kAllCentralityKinds)
        if (to_string(kind) == name) return kind;
    return std::nullopt;
}

void IterationParams::validate() const {
    if (!(damping > 0.0 && damping < 1.0))
        throw ValidationError("damping must be in (0, 1), got " + format_double(damping));
    if (!(tolerance > 0.0))
        throw ValidationError("tolerance must be > 0, got " + format_double(tolerance));
    if (max_iterations < 1)
        throw ValidationError("max_iterations must be >= 1, got " +
                              std::to_string(max_iterations));
}

CentralityScores degree_scores(const SocialGraph& g, Direction direction) {
    const std::size_t n = g.node_count();
    CentralityScores scores;
    scores.kind = direction == Direction::in ? CentralityKind::in_degree
                                             : CentralityKind::out_degree;
    scores.values.resize(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const auto u = static_cast<SocialGraph::NodeIndex>(i);
        scores.values[static_cast<std::size_t>(i)] = static_cast<double>(
            direction == Direction::in ? g.in_degree(u) : g.out_degree(u));
    }
    return scores;
}

CentralityScores pagerank(const SocialGraph& g, const IterationParams& params) {
    params.validate();
    const std::size_t n = g.node_count();
    if (n == 0) throw ValidationError("pagerank: empty graph");
    const double d = params.damping;
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> inv_out_degree(n);
    for (std::size_t u = 0; u < n; ++u) {
        const auto deg = g.out_degree(static_cast<SocialGraph::NodeIndex>(u));
        inv_out_degree[u] = deg == 0 ? 0.0 : 1.0 / static_cast<double>(deg);
    }

    std::vector<double> x(n, inv_n);
    std::vector<double> next(n);
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;

    while (iterations < params.max_iterations) {
        const double dangling_mass = blocked_sum(n, [&](std::size_t u) {
            return inv_out_degree[u] == 0.0 ? x[u] : 0.0;
        });
        const double base = (1.0 - d) * inv_n + d * dangling_mass * inv_n;

#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            const auto v = static_cast<SocialGraph::NodeIndex>(i);
            double sum = 0.0;
            for (const auto u : g.in_neighbors(v)) sum += x[u] * inv_out_degree[u];
            next[static_cast<std::size_t>(i)] = base + d * sum;
        }

        residual = blocked_sum(n, [&](std::size_t u) { return std::abs(next[u] - x[u]); });
        x.swap(next);
        ++iterations;
        if (residual < params.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("pagerank did not converge within " +
                                   std::to_string(params.max_iterations) +
                                   " iterations (residual " + format_double(residual) + ")",
                               {x}, iterations, residual);

    // Exact-sum cleanup: the update preserves total mass analytically, this
    // removes the accumulated rounding drift.
    const double total = blocked_sum(n, [&](std::size_t u) { return x[u]; });
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
        x[static_cast<std::size_t>(i)] /= total;

    CentralityScores scores;
    scores.kind = CentralityKind::pagerank;
    scores.values = std::move(x);
    scores.iterations = iterations;
    scores.residual = residual;
    return scores;
}

HitsScores hits(const SocialGraph& g, const IterationParams& params) {
    params.validate();
    const std::size_t n = g.node_count();
    if (n == 0) throw ValidationError("hits: empty graph");
    const double inv_n = 1.0 / static_cast<double>(n);

    HitsScores result;
    result.authority.kind = CentralityKind::hits_authority;
    result.hub.kind = CentralityKind::hits_hub;

    if (g.edge_count() == 0) {
        result.authority.values.assign(n, inv_n);
        result.hub.values.assign(n, inv_n);
        return result;
    }

    std::vector<double> auth(n, inv_n);
    std::vector<double> hub(n, inv_n);
    std::vector<double> next_auth(n);
    std::vector<double> next_hub(n);
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;

    while (iterations < params.max_iterations) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            const auto v = static_cast<SocialGraph::NodeIndex>(i);
            double sum = 0.0;
            for (const auto u : g.in_neighbors(v)) sum += hub[u];
            next_auth[static_cast<std::size_t>(i)] = sum;
        }
        const double auth_total = blocked_sum(n, [&](std::size_t u) { return next_auth[u]; });
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
            next_auth[static_cast<std::size_t>(i)] /= auth_total;

#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            const auto u = static_cast<SocialGraph::NodeIndex>(i);
            double sum = 0.0;
            for (const auto v : g.out_neighbors(u)) sum += next_auth[v];
            next_hub[static_cast<std::size_t>(i)] = sum;
        }
        const double hub_total = blocked_sum(n, [&](std::size_t u) { return next_hub[u]; });
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
            next_hub[static_cast<std::size_t>(i)] /= hub_total;

        const double auth_change =
            blocked_max(n, [&](std::size_t u) { return std::abs(next_auth[u] - auth[u]); });
        const double hub_change =
            blocked_max(n, [&](std::size_t u) { return std::abs(next_hub[u] - hub[u]); });
        residual = std::max(auth_change, hub_change);

        auth.swap(next_auth);
        hub.swap(next_hub);
        ++iterations;
        if (residual < params.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("hits did not converge within " +
                                   std::to_string(params.max_iterations) +
                                   " iterations (residual " + format_double(residual) + ")",
                               {auth, hub}, iterations, residual);

    result.authority.values = std::move(auth);
    result.authority.iterations = iterations;
    result.authority.residual = residual;
    result.hub.values = std::move(hub);
    result.hub.iterations = iterations;
    result.hub.residual = residual;
    return result;
}

namespace {

bool is_iterative(CentralityKind kind) {
    return kind == CentralityKind::pagerank || kind == CentralityKind::hits_authority ||
           kind == CentralityKind::hits_hub;
}

} // namespace

void write_scores(const SocialGraph& g, const CentralityScores& scores,
                  const std::filesystem::path& path, const std::string& graph_digest,
                  const std::optional<IterationParams>& params) {
    if (scores.values.size() != g.node_count())
        throw ValidationError("write_scores: score vector does not match graph size");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    for (std::size_t i = 0; i < scores.values.size(); ++i)
        out << g.user_at(static_cast<SocialGraph::NodeIndex>(i)) << '\t'
            << format_double(scores.values[i]) << '\n';
    if (!out) throw ValidationError("write failed: " + path.string());

    nlohmann::json meta;
    meta["kind"] = std::string(to_string(scores.kind));
    meta["graph_digest"] = graph_digest;
    meta["nodes"] = g.node_count();
    meta["iterations"] = scores.iterations;
    meta["residual"] = scores.residual;
    if (params && is_iterative(scores.kind)) {
        meta["params"] = {{"damping", params->damping},
                          {"tolerance", params->tolerance},
                          {"max_iterations", params->max_iterations}};
    }
    std::ofstream side(path.string() + ".json", std::ios::binary | std::ios::trunc);
    if (!side) throw ValidationError("cannot write file: " + path.string() + ".json");
    side << meta.dump(2) << '\n';
    if (!side) throw ValidationError("write failed: " + path.string() + ".json");
}

LoadedScores read_scores(const SocialGraph& g, const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path.string());

    const std::filesystem::path side_path = path.string() + ".json";
    std::ifstream side(side_path, std::ios::binary);
    if (!side) throw ValidationError("missing score sidecar: " + side_path.string());
    nlohmann::json meta;
    try {
        side >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("invalid score sidecar " + side_path.string() + ": " + e.what());
    }
    if (!meta.contains("kind") || !meta["kind"].is_string())
        throw ValidationError("score sidecar without 'kind': " + side_path.string());
    const auto kind = centrality_kind_from_string(meta["kind"].get<std::string>());
    if (!kind)
        throw ValidationError("score sidecar with unknown kind '" +
                              meta["kind"].get<std::string>() + "': " + side_path.string());

    LoadedScores loaded;
    loaded.scores.kind = *kind;
    loaded.scores.iterations = meta.value("iterations", 0);
    loaded.scores.residual = meta.value("residual", 0.0);
    loaded.graph_digest = meta.value("graph_digest", "");

    std::string line;
    std::size_t lineno = 0;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_tabs(text);
        if (fields.size() != 2)
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": expected 'user_id<TAB>score'");
        const UserId user = parse_u64(fields[0], "user id");
        if (row >= g.node_count() || g.user_at(static_cast<SocialGraph::NodeIndex>(row)) != user)
            throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                                  ": user " + std::to_string(user) +
                                  " does not match the graph's node order");
        loaded.scores.values.push_back(parse_double(fields[1], "score"));
        ++row;
    }
    if (row != g.node_count())
        throw ValidationError(path.string() + ": has " + std::to_string(row) +
                              " scores for a graph with " + std::to_string(g.node_count()) +
                              " nodes");
    return loaded;
}

} // namespace geoloc
