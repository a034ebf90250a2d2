#include "geoloc/estimator.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include <json.hpp>

#include "geoloc/errors.hpp"
#include "geoloc/util.hpp"

namespace geoloc {

std::string_view to_string(EstimationOutcome outcome) {
    switch (outcome) {
        case EstimationOutcome::easy: return "easy";
        case EstimationOutcome::hard: return "hard";
        case EstimationOutcome::unknown: return "unknown";
    }
    return "unknown";
}

std::optional<std::string> estimate_location(const SocialGraph& g, const HomeLocationTable& homes,
                                             UserId u) {
    const auto idx = g.index_of(u);
    if (!idx) throw ValidationError("unknown user " + std::to_string(u));

    // Friends without a known home contribute no vote; the target's own
    // label is never consulted.
    std::map<std::string, std::size_t> votes;
    for (const auto v : g.mutual_neighbors(*idx)) {
        const std::string* city = homes.find(g.user_at(v));
        if (city != nullptr) ++votes[*city];
    }
    std::optional<std::string> best;
    std::size_t best_count = 0;
    for (const auto& [city, count] : votes) {
        // Map order is lexicographic, so strict > keeps the smallest tie.
        if (count > best_count) {
            best_count = count;
            best = city;
        }
    }
    return best;
}

namespace detail {

// Shared by the parallel and serial classify kernels. codes_of_friends is
// scratch reused across calls within one thread.
std::int32_t predict_code(const SocialGraph& g, const CityCodes& codes,
                          SocialGraph::NodeIndex u, std::vector<std::int32_t>& scratch) {
    scratch.clear();
    for (const auto v : g.mutual_neighbors(u)) {
        const std::int32_t code = codes.code_per_node[v];
        if (code >= 0) scratch.push_back(code);
    }
    if (scratch.empty()) return -1;
    std::sort(scratch.begin(), scratch.end());
    std::int32_t best = scratch.front();
    std::size_t best_count = 0;
    std::size_t i = 0;
    while (i < scratch.size()) {
        std::size_t j = i;
        while (j < scratch.size() && scratch[j] == scratch[i]) ++j;
        if (j - i > best_count) { // code order == lexicographic city order
            best_count = j - i;
            best = scratch[i];
        }
        i = j;
    }
    return best;
}

Classification assemble_classification(const SocialGraph& g, const CityCodes& codes,
                                       const std::vector<std::int32_t>& predicted) {
    Classification c;
    c.results.reserve(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const UserId user = g.user_at(static_cast<SocialGraph::NodeIndex>(i));
        EstimationResult r;
        r.user = user;
        r.truth = codes.names[static_cast<std::size_t>(codes.code_per_node[i])];
        if (predicted[i] < 0) {
            r.outcome = EstimationOutcome::unknown;
            c.partition.unknown.push_back(user);
        } else {
            r.predicted = codes.names[static_cast<std::size_t>(predicted[i])];
            if (predicted[i] == codes.code_per_node[i]) {
                r.outcome = EstimationOutcome::easy;
                c.partition.easy.push_back(user);
            } else {
                r.outcome = EstimationOutcome::hard;
                c.partition.hard.push_back(user);
            }
        }
        c.results.push_back(std::move(r));
    }
    return c;
}

void require_full_coverage(const SocialGraph& g, const CityCodes& codes) {
    for (std::size_t i = 0; i < g.node_count(); ++i)
        if (codes.code_per_node[i] < 0)
            throw ValidationError(
                "user " + std::to_string(g.user_at(static_cast<SocialGraph::NodeIndex>(i))) +
                " has no home location");
}

} // namespace detail

Classification classify_users(const SocialGraph& g, const HomeLocationTable& homes) {
    const CityCodes codes = CityCodes::build(g, homes);
    detail::require_full_coverage(g, codes);

    const std::size_t n = g.node_count();
    std::vector<std::int32_t> predicted(n, -1);
#pragma omp parallel
    {
        std::vector<std::int32_t> scratch;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            predicted[static_cast<std::size_t>(i)] =
                detail::predict_code(g, codes, static_cast<SocialGraph::NodeIndex>(i), scratch);
        }
    }
    return detail::assemble_classification(g, codes, predicted);
}

void write_results(const Classification& c, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    for (const EstimationResult& r : c.results)
        out << r.user << '\t' << r.truth << '\t' << (r.predicted ? *r.predicted : "-") << '\t'
            << to_string(r.outcome) << '\n';
    if (!out) throw ValidationError("write failed: " + path.string());
}

void write_partition_summary(const Classification& c, const std::filesystem::path& path) {
    nlohmann::json summary;
    summary["easy"] = c.partition.easy.size();
    summary["hard"] = c.partition.hard.size();
    summary["unknown"] = c.partition.unknown.size();
    summary["total"] =
        c.partition.easy.size() + c.partition.hard.size() + c.partition.unknown.size();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    out << summary.dump(2) << '\n';
    if (!out) throw ValidationError("write failed: " + path.string());
}

} // namespace geoloc
