// Benchmark: OpenMP kernels vs the serial reference on a synthetic celebrity
// graph. Verifies bit-identical outputs while timing both paths.
//
//   geoloc_bench [scale]
//
// scale 1 (default) is ~1e5 nodes / 2e6 directed edges; other scales hold
// the structure and multiply the fan population.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "geoloc/centrality.hpp"
#include "geoloc/estimator.hpp"
#include "geoloc/graph.hpp"
#include "geoloc/serial.hpp"
#include "geoloc/synth.hpp"

using namespace geoloc;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double time_s(F f) {
    const auto start = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void row(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-12s %10.3f s %10.3f s %8.2fx   %s\n", name, serial_s, parallel_s,
                serial_s / parallel_s, identical ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const int scale = argc > 1 ? std::atoi(argv[1]) : 1;
    if (scale < 1) {
        std::fprintf(stderr, "usage: geoloc_bench [scale >= 1]\n");
        return 1;
    }

    CelebrityGraphParams params;
    params.cities = 100;
    params.fans_per_city = static_cast<std::uint32_t>(999 * scale);
    params.celebrities = 100;
    params.fan_follow_celebs = 8;
    params.local_mutual_degree = 6;
    params.celeb_followback = 0.2;
    params.seed = 123;

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif

    const auto data = celebrity_graph(params);
    const auto g = build_graph(data.edges, data.homes.users());
    std::printf("graph: %zu nodes, %zu edges\n\n", g.node_count(), g.edge_count());
    std::printf("%-12s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        CentralityScores serial_out, parallel_out;
        const double ts = time_s([&] { serial_out = serial::degree_scores(g, Direction::in); });
        const double tp = time_s([&] { parallel_out = degree_scores(g, Direction::in); });
        row("in_degree", ts, tp, serial_out.values == parallel_out.values);
    }
    {
        CentralityScores serial_out, parallel_out;
        const double ts = time_s([&] { serial_out = serial::pagerank(g); });
        const double tp = time_s([&] { parallel_out = pagerank(g); });
        row("pagerank", ts, tp,
            serial_out.values == parallel_out.values &&
                serial_out.iterations == parallel_out.iterations);
    }
    {
        HitsScores serial_out, parallel_out;
        const double ts = time_s([&] { serial_out = serial::hits(g); });
        const double tp = time_s([&] { parallel_out = hits(g); });
        row("hits", ts, tp,
            serial_out.authority.values == parallel_out.authority.values &&
                serial_out.hub.values == parallel_out.hub.values);
    }
    {
        Classification serial_out, parallel_out;
        const double ts = time_s([&] { serial_out = serial::classify_users(g, data.homes); });
        const double tp = time_s([&] { parallel_out = classify_users(g, data.homes); });
        const bool identical = serial_out.partition.easy == parallel_out.partition.easy &&
                               serial_out.partition.hard == parallel_out.partition.hard &&
                               serial_out.partition.unknown == parallel_out.partition.unknown;
        row("classify", ts, tp, identical);
    }
    return 0;
}
