#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace oracle {

using geoloc::Edge;
using geoloc::SocialGraph;
using geoloc::UserId;

std::vector<double> pagerank_dense(const SocialGraph& g, double damping) {
    const std::size_t n = g.node_count();
    const double inv_n = 1.0 / static_cast<double>(n);

    // A = I - d*M, column u of M: 1/outdeg(u) on out-neighbors, or 1/n
    // everywhere for dangling u.
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
    for (std::size_t u = 0; u < n; ++u) {
        const auto out = g.out_neighbors(static_cast<SocialGraph::NodeIndex>(u));
        if (out.empty()) {
            for (std::size_t v = 0; v < n; ++v) a[v][u] -= damping * inv_n;
        } else {
            const double w = damping / static_cast<double>(out.size());
            for (const auto v : out) a[v][u] -= w;
        }
    }
    std::vector<double> b(n, (1.0 - damping) * inv_n);

    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        if (a[pivot][col] == 0.0) throw std::runtime_error("pagerank_dense: singular system");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
        double sum = b[row];
        for (std::size_t k = row + 1; k < n; ++k) sum -= a[row][k] * x[k];
        x[row] = sum / a[row][row];
    }
    return x;
}

std::vector<double> hits_authority_dense(const SocialGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<double> v(n, 0.0);
    if (g.edge_count() == 0) {
        std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(n));
        return v;
    }

    std::vector<std::vector<double>> ata(n, std::vector<double>(n, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        const auto out = g.out_neighbors(static_cast<SocialGraph::NodeIndex>(k));
        for (const auto i : out)
            for (const auto j : out) ata[i][j] += 1.0;
    }

    // Start from At * uniform, matching the alternating update's limit on
    // degenerate top eigenspaces.
    for (std::size_t i = 0; i < n; ++i)
        v[i] = static_cast<double>(g.in_degree(static_cast<SocialGraph::NodeIndex>(i))) /
               static_cast<double>(n);
    double norm = 0.0;
    for (const double value : v) norm += value;
    for (double& value : v) value /= norm;

    std::vector<double> next(n);
    for (int iter = 0; iter < 500000; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) sum += ata[i][j] * v[j];
            next[i] = sum;
        }
        double total = 0.0;
        for (const double value : next) total += value;
        for (double& value : next) value /= total;
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change = std::max(change, std::abs(next[i] - v[i]));
        v.swap(next);
        if (change < 1e-15) break;
    }
    return v;
}

bool winding_contains(const std::vector<std::vector<geoloc::LatLon>>& rings, double lat,
                      double lon) {
    // Sunday's crossing-based winding number; x = lon, y = lat.
    const auto is_left = [](const geoloc::LatLon& p0, const geoloc::LatLon& p1, double y,
                            double x) {
        return (p1.lon - p0.lon) * (y - p0.lat) - (x - p0.lon) * (p1.lat - p0.lat);
    };
    long winding = 0;
    for (const auto& ring : rings) {
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            const auto& p0 = ring[i];
            const auto& p1 = ring[i + 1];
            if (p0.lat <= lat) {
                if (p1.lat > lat && is_left(p0, p1, lat, lon) > 0.0) ++winding;
            } else {
                if (p1.lat <= lat && is_left(p0, p1, lat, lon) < 0.0) --winding;
            }
        }
    }
    return winding != 0;
}

geoloc::Classification classify_brute(std::span<const Edge> raw_edges,
                                      const geoloc::HomeLocationTable& homes) {
    std::set<UserId> located;
    for (const auto& [user, city] : homes) located.insert(user);

    std::set<std::pair<UserId, UserId>> edges;
    for (const Edge& e : raw_edges) {
        if (e.follower == e.followee) continue;
        if (located.count(e.follower) == 0 || located.count(e.followee) == 0) continue;
        edges.insert({e.follower, e.followee});
    }

    geoloc::Classification c;
    for (const UserId u : located) {
        std::map<std::string, std::size_t> votes;
        for (const UserId v : located) {
            if (v == u) continue;
            if (edges.count({u, v}) != 0 && edges.count({v, u}) != 0)
                ++votes[*homes.find(v)];
        }
        geoloc::EstimationResult r;
        r.user = u;
        r.truth = *homes.find(u);
        std::size_t best = 0;
        for (const auto& [city, count] : votes) {
            if (count > best) {
                best = count;
                r.predicted = city;
            }
        }
        if (!r.predicted) {
            r.outcome = geoloc::EstimationOutcome::unknown;
            c.partition.unknown.push_back(u);
        } else if (*r.predicted == r.truth) {
            r.outcome = geoloc::EstimationOutcome::easy;
            c.partition.easy.push_back(u);
        } else {
            r.outcome = geoloc::EstimationOutcome::hard;
            c.partition.hard.push_back(u);
        }
        c.results.push_back(std::move(r));
    }
    return c;
}

std::vector<UserId> mutual_brute(std::span<const Edge> raw_edges,
                                 std::span<const UserId> located, UserId u) {
    std::set<UserId> nodes(located.begin(), located.end());
    std::set<std::pair<UserId, UserId>> edges;
    for (const Edge& e : raw_edges) {
        if (e.follower == e.followee) continue;
        if (nodes.count(e.follower) == 0 || nodes.count(e.followee) == 0) continue;
        edges.insert({e.follower, e.followee});
    }
    std::vector<UserId> result;
    for (const UserId v : nodes)
        if (v != u && edges.count({u, v}) != 0 && edges.count({v, u}) != 0) result.push_back(v);
    return result;
}

std::vector<Edge> random_edges(geoloc::Rng& rng, std::uint32_t n, double p, double reciprocity) {
    std::vector<Edge> edges;
    for (std::uint32_t u = 0; u + 1 < n; ++u) {
        for (std::uint32_t v = u + 1; v < n; ++v) {
            if (!rng.bernoulli(p)) continue;
            if (rng.bernoulli(reciprocity)) {
                edges.push_back({u, v});
                edges.push_back({v, u});
            } else if (rng.bernoulli(0.5)) {
                edges.push_back({u, v});
            } else {
                edges.push_back({v, u});
            }
        }
    }
    return edges;
}

std::vector<geoloc::LatLon> random_star_polygon(geoloc::Rng& rng, double center_lat,
                                                double center_lon, double max_radius,
                                                std::size_t min_vertices,
                                                std::size_t max_vertices) {
    const std::size_t count =
        min_vertices + static_cast<std::size_t>(rng.next_below(max_vertices - min_vertices + 1));
    std::vector<double> angles(count);
    for (double& angle : angles) angle = rng.next_double() * 2.0 * 3.14159265358979323846;
    std::sort(angles.begin(), angles.end());
    std::vector<geoloc::LatLon> ring;
    ring.reserve(count + 1);
    for (const double angle : angles) {
        const double radius = max_radius * (0.2 + 0.8 * rng.next_double());
        ring.push_back({center_lat + radius * std::sin(angle), center_lon + radius * std::cos(angle)});
    }
    ring.push_back(ring.front());
    return ring;
}

} // namespace oracle
