#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geoloc/errors.hpp"
#include "geoloc/estimator.hpp"
#include "geoloc/rng.hpp"
#include "geoloc/serial.hpp"
#include "oracles.hpp"

using namespace geoloc;
namespace fs = std::filesystem;

namespace {

SocialGraph graph_on(std::uint32_t n, const std::vector<Edge>& edges) {
    std::vector<UserId> located(n);
    for (std::uint32_t i = 0; i < n; ++i) located[i] = i;
    return build_graph(edges, located);
}

HomeLocationTable homes_of(const std::vector<std::string>& cities) {
    HomeLocationTable t;
    for (std::size_t i = 0; i < cities.size(); ++i) t.assign(i, cities[i]);
    return t;
}

std::vector<Edge> mutual(std::initializer_list<std::pair<UserId, UserId>> pairs) {
    std::vector<Edge> edges;
    for (const auto& [a, b] : pairs) {
        edges.push_back({a, b});
        edges.push_back({b, a});
    }
    return edges;
}

bool same_classification(const Classification& a, const Classification& b) {
    if (a.partition.easy != b.partition.easy) return false;
    if (a.partition.hard != b.partition.hard) return false;
    if (a.partition.unknown != b.partition.unknown) return false;
    if (a.results.size() != b.results.size()) return false;
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        if (a.results[i].user != b.results[i].user) return false;
        if (a.results[i].predicted != b.results[i].predicted) return false;
        if (a.results[i].truth != b.results[i].truth) return false;
        if (a.results[i].outcome != b.results[i].outcome) return false;
    }
    return true;
}

} // namespace

TEST_CASE("estimate_location takes the friends' majority") {
    // 0 is mutual with 1, 2, 3 whose homes are A, A, B.
    const auto g = graph_on(4, mutual({{0, 1}, {0, 2}, {0, 3}}));
    const auto homes = homes_of({"C", "A", "A", "B"});
    CHECK(estimate_location(g, homes, 0) == std::optional<std::string>("A"));
}

TEST_CASE("estimate_location without mutual followers yields none") {
    const auto g = graph_on(3, {{0, 1}, {1, 2}}); // one-way only
    const auto homes = homes_of({"A", "A", "A"});
    CHECK(estimate_location(g, homes, 0) == std::nullopt);
    CHECK(estimate_location(g, homes, 2) == std::nullopt);
}

TEST_CASE("estimate_location breaks ties to the smaller city_id") {
    const auto g = graph_on(3, mutual({{0, 1}, {0, 2}}));
    const auto homes = homes_of({"Z", "B", "A"});
    CHECK(estimate_location(g, homes, 0) == std::optional<std::string>("A"));
}

TEST_CASE("estimate_location never consults the target's own label") {
    // 0's only friends live in B; 0's own label A must not win.
    const auto g = graph_on(3, mutual({{0, 1}, {0, 2}}));
    const auto homes = homes_of({"A", "B", "B"});
    CHECK(estimate_location(g, homes, 0) == std::optional<std::string>("B"));
}

TEST_CASE("estimate_location skips friends without a home") {
    const auto g = graph_on(3, mutual({{0, 1}, {0, 2}}));
    HomeLocationTable homes;
    homes.assign(0, "A");
    homes.assign(1, "B");
    // user 2 has no home
    CHECK(estimate_location(g, homes, 0) == std::optional<std::string>("B"));
}

TEST_CASE("estimate_location rejects unknown users") {
    const auto g = graph_on(2, mutual({{0, 1}}));
    const auto homes = homes_of({"A", "A"});
    CHECK_THROWS_WITH_AS((void)estimate_location(g, homes, 7),
                         doctest::Contains("unknown user"), ValidationError);
}

TEST_CASE("classify_users on fixed instances") {
    SUBCASE("mutual pair sharing a home is easy") {
        const auto g = graph_on(2, mutual({{0, 1}}));
        const auto c = classify_users(g, homes_of({"A", "A"}));
        CHECK(c.partition.easy == std::vector<UserId>{0, 1});
        CHECK(c.partition.hard.empty());
        CHECK(c.partition.unknown.empty());
    }
    SUBCASE("mutual pair with different homes is hard both ways") {
        const auto g = graph_on(2, mutual({{0, 1}}));
        const auto c = classify_users(g, homes_of({"A", "B"}));
        CHECK(c.partition.hard == std::vector<UserId>{0, 1});
        CHECK(*c.results[0].predicted == "B");
        CHECK(*c.results[1].predicted == "A");
    }
    SUBCASE("isolated nodes are unknown") {
        const auto g = graph_on(3, mutual({{0, 1}}));
        const auto c = classify_users(g, homes_of({"A", "A", "A"}));
        CHECK(c.partition.unknown == std::vector<UserId>{2});
    }
    SUBCASE("missing home is a validation error") {
        const auto g = graph_on(2, mutual({{0, 1}}));
        HomeLocationTable partial;
        partial.assign(0, "A");
        CHECK_THROWS_WITH_AS((void)classify_users(g, partial),
                             doctest::Contains("has no home location"), ValidationError);
    }
}

TEST_CASE("reference half-million-user group sizes partition the population") {
    CHECK(121275 + 267809 + 82677 == 471761);
}

TEST_CASE("partition is disjoint and exhaustive; unknown iff no mutual followers") {
    Rng rng(83);
    for (int trial = 0; trial < 20; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + rng.next_below(79));
        const auto edges = oracle::random_edges(rng, n, 0.08, 0.5);
        const auto g = graph_on(n, edges);
        HomeLocationTable homes;
        for (std::uint32_t i = 0; i < n; ++i)
            homes.assign(i, "city" + std::to_string(rng.next_below(5)));
        const auto c = classify_users(g, homes);

        CHECK(c.partition.easy.size() + c.partition.hard.size() + c.partition.unknown.size() == n);
        std::vector<UserId> all;
        all.insert(all.end(), c.partition.easy.begin(), c.partition.easy.end());
        all.insert(all.end(), c.partition.hard.begin(), c.partition.hard.end());
        all.insert(all.end(), c.partition.unknown.begin(), c.partition.unknown.end());
        std::sort(all.begin(), all.end());
        CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
        CHECK(all.size() == n);

        for (std::uint32_t u = 0; u < n; ++u) {
            const bool has_friends = !g.mutual_neighbors(u).empty();
            const bool is_unknown = c.results[u].outcome == EstimationOutcome::unknown;
            CHECK(has_friends == !is_unknown);
        }
    }
}

TEST_CASE("classify_users matches the brute-force classifier on random graphs") {
    Rng rng(89);
    for (int trial = 0; trial < 40; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + rng.next_below(59));
        const auto edges = oracle::random_edges(rng, n, 0.1, 0.5);
        HomeLocationTable homes;
        for (std::uint32_t i = 0; i < n; ++i)
            homes.assign(i, "c" + std::to_string(rng.next_below(4)));
        const auto g = build_graph(edges, homes.users());
        const auto mine = classify_users(g, homes);
        const auto brute = oracle::classify_brute(edges, homes);
        CHECK(same_classification(mine, brute));
        CHECK(same_classification(mine, serial::classify_users(g, homes)));
    }
}

TEST_CASE("order-preserving city relabeling keeps the partition") {
    Rng rng(97);
    const auto n = 40u;
    const auto edges = oracle::random_edges(rng, n, 0.15, 0.6);
    HomeLocationTable homes;
    HomeLocationTable relabeled;
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::string city = "c" + std::to_string(rng.next_below(4));
        homes.assign(i, city);
        relabeled.assign(i, "zone_" + city); // same relative order
    }
    const auto g = build_graph(edges, homes.users());
    const auto a = classify_users(g, homes);
    const auto b = classify_users(g, relabeled);
    CHECK(a.partition.easy == b.partition.easy);
    CHECK(a.partition.hard == b.partition.hard);
    CHECK(a.partition.unknown == b.partition.unknown);
}

TEST_CASE("results and partition files") {
    const fs::path dir = fs::path("tmp_estimator_io");
    fs::remove_all(dir);
    fs::create_directories(dir);

    const auto g = graph_on(3, mutual({{0, 1}}));
    const auto c = classify_users(g, homes_of({"A", "B", "C"}));
    write_results(c, dir / "results.tsv");
    write_partition_summary(c, dir / "partition.json");

    std::ifstream in(dir / "results.tsv", std::ios::binary);
    std::string line;
    std::getline(in, line);
    CHECK(line == "0\tA\tB\thard");
    std::getline(in, line);
    CHECK(line == "1\tB\tA\thard");
    std::getline(in, line);
    CHECK(line == "2\tC\t-\tunknown");

    std::ifstream jin(dir / "partition.json", std::ios::binary);
    nlohmann::json summary;
    jin >> summary;
    CHECK(summary["easy"] == 0);
    CHECK(summary["hard"] == 2);
    CHECK(summary["unknown"] == 1);
    CHECK(summary["total"] == 3);
    fs::remove_all(dir);
}
