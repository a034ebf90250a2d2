#include "geoloc/serial.hpp"

#include <cmath>

#include "geoloc/errors.hpp"
#include "geoloc/util.hpp"

namespace geoloc {
namespace detail {
// from estimator.cpp
std::int32_t predict_code(const SocialGraph& g, const CityCodes& codes,
                          SocialGraph::NodeIndex u, std::vector<std::int32_t>& scratch);
Classification assemble_classification(const SocialGraph& g, const CityCodes& codes,
                                       const std::vector<std::int32_t>& predicted);
void require_full_coverage(const SocialGraph& g, const CityCodes& codes);
} // namespace detail

namespace serial {

namespace {

// Same fixed-block structure as geoloc::blocked_sum, single-threaded, so the
// serial kernels reproduce the parallel results bit for bit.
template <class F>
double blocked_sum_1t(std::size_t n, F f) {
    double total = 0.0;
    for (std::size_t lo = 0; lo < n; lo += geoloc::detail::kReduceBlock) {
        const std::size_t hi = std::min(lo + geoloc::detail::kReduceBlock, n);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        total += s;
    }
    return total;
}

template <class F>
double max_1t(std::size_t n, F f) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, f(i));
    return m;
}

} // namespace

CentralityScores degree_scores(const SocialGraph& g, Direction direction) {
    const std::size_t n = g.node_count();
    CentralityScores scores;
    scores.kind = direction == Direction::in ? CentralityKind::in_degree
                                             : CentralityKind::out_degree;
    scores.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = static_cast<SocialGraph::NodeIndex>(i);
        scores.values[i] =
            static_cast<double>(direction == Direction::in ? g.in_degree(u) : g.out_degree(u));
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
        const double dangling_mass =
            blocked_sum_1t(n, [&](std::size_t u) { return inv_out_degree[u] == 0.0 ? x[u] : 0.0; });
        const double base = (1.0 - d) * inv_n + d * dangling_mass * inv_n;
        for (std::size_t v = 0; v < n; ++v) {
            double sum = 0.0;
            for (const auto u : g.in_neighbors(static_cast<SocialGraph::NodeIndex>(v)))
                sum += x[u] * inv_out_degree[u];
            next[v] = base + d * sum;
        }
        residual = blocked_sum_1t(n, [&](std::size_t u) { return std::abs(next[u] - x[u]); });
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

    const double total = blocked_sum_1t(n, [&](std::size_t u) { return x[u]; });
    for (std::size_t u = 0; u < n; ++u) x[u] /= total;

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
        for (std::size_t v = 0; v < n; ++v) {
            double sum = 0.0;
            for (const auto u : g.in_neighbors(static_cast<SocialGraph::NodeIndex>(v)))
                sum += hub[u];
            next_auth[v] = sum;
        }
        const double auth_total = blocked_sum_1t(n, [&](std::size_t u) { return next_auth[u]; });
        for (std::size_t v = 0; v < n; ++v) next_auth[v] /= auth_total;

        for (std::size_t u = 0; u < n; ++u) {
            double sum = 0.0;
            for (const auto v : g.out_neighbors(static_cast<SocialGraph::NodeIndex>(u)))
                sum += next_auth[v];
            next_hub[u] = sum;
        }
        const double hub_total = blocked_sum_1t(n, [&](std::size_t u) { return next_hub[u]; });
        for (std::size_t u = 0; u < n; ++u) next_hub[u] /= hub_total;

        const double auth_change =
            max_1t(n, [&](std::size_t u) { return std::abs(next_auth[u] - auth[u]); });
        const double hub_change =
            max_1t(n, [&](std::size_t u) { return std::abs(next_hub[u] - hub[u]); });
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

Classification classify_users(const SocialGraph& g, const HomeLocationTable& homes) {
    const CityCodes codes = CityCodes::build(g, homes);
    geoloc::detail::require_full_coverage(g, codes);
    const std::size_t n = g.node_count();
    std::vector<std::int32_t> predicted(n, -1);
    std::vector<std::int32_t> scratch;
    for (std::size_t i = 0; i < n; ++i)
        predicted[i] =
            geoloc::detail::predict_code(g, codes, static_cast<SocialGraph::NodeIndex>(i), scratch);
    return geoloc::detail::assemble_classification(g, codes, predicted);
}

} // namespace serial
} // namespace geoloc
