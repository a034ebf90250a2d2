#include <doctest.h>

#include <algorithm>

#include "geoloc/centrality.hpp"
#include "geoloc/errors.hpp"
#include "geoloc/estimator.hpp"
#include "geoloc/synth.hpp"
#include "oracles.hpp"

using namespace geoloc;

TEST_CASE("planted partition with p_in 1, p_out 0, full reciprocity is all easy") {
    PlantedPartitionParams p;
    p.communities = 3;
    p.size = 5;
    p.p_in = 1.0;
    p.p_out = 0.0;
    p.reciprocity = 1.0;
    p.seed = 1;
    const auto data = planted_partition(p);
    const auto g = build_graph(data.edges, data.homes.users());
    g.validate();
    // disjoint mutual 5-cliques
    CHECK(g.edge_count() == 3 * 5 * 4);
    const auto c = classify_users(g, data.homes);
    CHECK(c.partition.easy.size() == 15);
    CHECK(c.partition.hard.empty());
    CHECK(c.partition.unknown.empty());
}

TEST_CASE("planted partition with no edges is all unknown") {
    PlantedPartitionParams p;
    p.communities = 2;
    p.size = 4;
    p.p_in = 0.0;
    p.p_out = 0.0;
    p.seed = 9;
    const auto data = planted_partition(p);
    CHECK(data.edges.empty());
    const auto g = build_graph(data.edges, data.homes.users());
    const auto c = classify_users(g, data.homes);
    CHECK(c.partition.unknown.size() == 8);
}

TEST_CASE("pinned planted fixture: 10 communities x 100, seed 7") {
    PlantedPartitionParams p;
    p.communities = 10;
    p.size = 100;
    p.p_in = 0.2;
    p.p_out = 0.01;
    p.reciprocity = 1.0;
    p.seed = 7;
    const auto data = planted_partition(p);
    CHECK(data.edges.size() == 28900);

    const auto g = build_graph(data.edges, data.homes.users());
    const auto c = classify_users(g, data.homes);
    // frozen from the brute-force classifier's first run on this instance
    CHECK(c.partition.easy.size() == 1000);
    CHECK(c.partition.hard.empty());
    CHECK(c.partition.unknown.empty());
    CHECK(static_cast<double>(c.partition.easy.size()) / 1000.0 >= 0.95);
}

TEST_CASE("celebrity graph without followback leaves celebrities unknown") {
    CelebrityGraphParams p;
    p.cities = 3;
    p.fans_per_city = 6;
    p.celebrities = 4;
    p.fan_follow_celebs = 2;
    p.local_mutual_degree = 2;
    p.celeb_followback = 0.0;
    p.seed = 5;
    const auto data = celebrity_graph(p);
    const auto g = build_graph(data.edges, data.homes.users());
    g.validate();
    const auto c = classify_users(g, data.homes);
    for (UserId celeb = 0; celeb < 4; ++celeb) {
        CHECK(std::find(c.partition.unknown.begin(), c.partition.unknown.end(), celeb) !=
              c.partition.unknown.end());
    }
    // fans only befriend same-city fans, so every fan is easy
    CHECK(c.partition.easy.size() == 18);
    CHECK(c.partition.unknown.size() == 4);
}

TEST_CASE("celebrity graph with full followback spreads celebrity friendships across cities") {
    CelebrityGraphParams p;
    p.cities = 5;
    p.fans_per_city = 40;
    p.celebrities = 10;
    p.fan_follow_celebs = 3;
    p.local_mutual_degree = 4;
    p.celeb_followback = 1.0;
    p.seed = 42;
    const auto data = celebrity_graph(p);
    const auto g = build_graph(data.edges, data.homes.users());
    g.validate();
    CHECK(g.node_count() == 210);
    CHECK(g.edge_count() == 2636); // frozen from the first run

    const auto c = classify_users(g, data.homes);
    CHECK(c.partition.easy.size() == 201);
    CHECK(c.partition.hard.size() == 9);
    CHECK(c.partition.unknown.empty());

    // celebrities' mutual friends span cities
    for (UserId celeb = 0; celeb < 10; ++celeb) {
        const auto friends = mutual_followers(g, celeb);
        std::vector<std::string> cities;
        for (const UserId f : friends) cities.push_back(*data.homes.find(f));
        std::sort(cities.begin(), cities.end());
        cities.erase(std::unique(cities.begin(), cities.end()), cities.end());
        CHECK(cities.size() >= 3);
    }

    const auto h = hits(g);
    SUBCASE("mean authority of the hard group exceeds the easy group") {
        double easy_sum = 0.0;
        double hard_sum = 0.0;
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            if (c.results[i].outcome == EstimationOutcome::easy)
                easy_sum += h.authority.values[i];
            if (c.results[i].outcome == EstimationOutcome::hard)
                hard_sum += h.authority.values[i];
        }
        const double mean_easy = easy_sum / 201.0;
        const double mean_hard = hard_sum / 9.0;
        CHECK(mean_hard > mean_easy);
        // regression values from the first pinning run
        CHECK(mean_easy == doctest::Approx(0.004326000114693991).epsilon(1e-9));
        CHECK(mean_hard == doctest::Approx(0.014497108549611976).epsilon(1e-9));
    }
    SUBCASE("every celebrity's authority exceeds every fan's") {
        double min_celeb = 1e300;
        double max_fan = -1.0;
        for (std::size_t i = 0; i < g.node_count(); ++i) {
            const UserId user = g.user_at(static_cast<SocialGraph::NodeIndex>(i));
            if (user < 10)
                min_celeb = std::min(min_celeb, h.authority.values[i]);
            else
                max_fan = std::max(max_fan, h.authority.values[i]);
        }
        CHECK(min_celeb > max_fan);
    }
}

TEST_CASE("generators are deterministic per seed") {
    PlantedPartitionParams p;
    p.communities = 4;
    p.size = 10;
    p.p_in = 0.3;
    p.p_out = 0.05;
    p.reciprocity = 0.7;
    p.seed = 77;
    const auto a = planted_partition(p);
    const auto b = planted_partition(p);
    CHECK(a.edges == b.edges);
    CHECK(std::equal(a.homes.begin(), a.homes.end(), b.homes.begin(), b.homes.end()));

    p.seed = 78;
    const auto c = planted_partition(p);
    CHECK(a.edges != c.edges);

    CelebrityGraphParams cp;
    cp.seed = 12;
    cp.celeb_followback = 0.5;
    const auto x = celebrity_graph(cp);
    const auto y = celebrity_graph(cp);
    CHECK(x.edges == y.edges);
}

TEST_CASE("generated graphs satisfy the structural invariants") {
    PlantedPartitionParams p;
    p.communities = 3;
    p.size = 8;
    p.p_in = 0.4;
    p.p_out = 0.1;
    p.reciprocity = 0.5;
    p.seed = 31;
    const auto data = planted_partition(p);
    const auto g = build_graph(data.edges, data.homes.users());
    g.validate();
    CHECK(g.node_count() == 24);
    // reciprocity 1 would force symmetry; here just check both files agree
    for (const Edge& e : data.edges) {
        CHECK(data.homes.contains(e.follower));
        CHECK(data.homes.contains(e.followee));
    }
}

TEST_CASE("generator parameter validation") {
    SUBCASE("planted") {
        PlantedPartitionParams p;
        p.communities = 1;
        CHECK_THROWS_AS((void)planted_partition(p), ValidationError);
        p.communities = 2;
        p.size = 1;
        CHECK_THROWS_AS((void)planted_partition(p), ValidationError);
        p.size = 2;
        p.p_in = 0.1;
        p.p_out = 0.5;
        CHECK_THROWS_WITH_AS((void)planted_partition(p), "p_in must be >= p_out",
                             ValidationError);
        p.p_out = 0.05;
        p.reciprocity = 1.5;
        CHECK_THROWS_AS((void)planted_partition(p), ValidationError);
    }
    SUBCASE("celebrity") {
        CelebrityGraphParams p;
        p.fan_follow_celebs = 10;
        p.celebrities = 3;
        CHECK_THROWS_WITH_AS((void)celebrity_graph(p),
                             "fan_follow_celebs must be <= celebrities", ValidationError);
        p.fan_follow_celebs = 1;
        p.celeb_followback = -0.1;
        CHECK_THROWS_AS((void)celebrity_graph(p), ValidationError);
        p.celeb_followback = 0.0;
        p.fans_per_city = 1;
        p.local_mutual_degree = 2;
        CHECK_THROWS_AS((void)celebrity_graph(p), ValidationError);
    }
}
