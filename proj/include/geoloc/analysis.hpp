#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "geoloc/centrality.hpp"
#include "geoloc/estimator.hpp"
#include "geoloc/graph.hpp"

namespace geoloc {

/// Half-open intervals [edges[i], edges[i+1]) plus an optional dedicated bin
/// for score exactly 0 (degree and HITS scores can be 0, which no log bin
/// can hold).
struct BinSpec {
    std::vector<double> edges; // strictly increasing
    bool has_zero_bin = false;

    /// Total bins including the zero bin; the zero bin, when present, is
    /// index 0 and the intervals follow.
    std::size_t bin_count() const {
        return (edges.empty() ? 0 : edges.size() - 1) + (has_zero_bin ? 1 : 0);
    }

    friend bool operator==(const BinSpec&, const BinSpec&) = default;
};

/// Bin index for a score, or nullopt when the score falls outside the spec.
std::optional<std::size_t> bin_index(const BinSpec& spec, double score);

/// Logarithmically equal-width edges spanning [min_positive, max_value]; the
/// last edge is nudged up so max_value lands inside the final half-open
/// interval.
BinSpec make_log_bins(double min_positive, double max_value, int bins_per_decade,
                      bool include_zero_bin);

/// Bins covering every value in `scores` with the overall-population rule:
/// log bins from the smallest positive to the largest score, zero bin iff
/// any score is exactly 0.
BinSpec derive_bins(std::span<const double> scores, int bins_per_decade);

struct ScoreDistribution {
    BinSpec spec;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    double fraction(std::size_t bin) const {
        return total == 0 ? 0.0
                          : static_cast<double>(counts[bin]) / static_cast<double>(total);
    }
};

/// Counts the selected nodes' scores into spec's bins. Throws when a score
/// falls outside every bin (naming the user) or when the selection is empty.
ScoreDistribution score_distribution(const CentralityScores& scores, const SocialGraph& g,
                                     std::span<const UserId> users, const BinSpec& spec);

/// Fast path over internal node indices.
ScoreDistribution score_distribution_indexed(std::span<const double> values,
                                             std::span<const SocialGraph::NodeIndex> selection,
                                             const BinSpec& spec, const SocialGraph& g);

/// Per-bin log10(b/a) with a = overall fraction, b = group fraction; nullopt
/// where either side is 0 (undefined, kept explicit so plots can show gaps).
struct BiasSeries {
    std::string group;
    std::vector<std::optional<double>> values;
};

/// Both distributions must share an identical BinSpec.
BiasSeries bias(const ScoreDistribution& group_dist, const ScoreDistribution& overall_dist,
                std::string group_label);

struct AnalysisOptions {
    int bins_per_decade = 5;
};

struct AnalysisReport {
    struct KindBlock {
        CentralityKind kind;
        BinSpec bins;
        ScoreDistribution overall;
        ScoreDistribution easy;
        ScoreDistribution hard;
        ScoreDistribution unknown;
        BiasSeries bias_easy;
        BiasSeries bias_hard;
    };
    std::vector<KindBlock> kinds; // ordered as the input scores
    std::size_t easy_count = 0;
    std::size_t hard_count = 0;
    std::size_t unknown_count = 0;
    std::size_t total_count = 0;
    int bins_per_decade = 0;
};

/// Distributions for overall and each group plus easy/hard bias series, per
/// centrality kind. The unknown group gets a distribution but no bias
/// series. Empty groups yield all-zero distributions (total 0).
AnalysisReport run_analysis(const SocialGraph& g, const Classification& classification,
                            std::span<const CentralityScores> scores,
                            const AnalysisOptions& options = {});

/// One CSV per (kind, series): `bin_lower,bin_upper,count,fraction,bias_or_NA`
/// (zero bin emitted as bounds 0,0), plus manifest.json listing every series,
/// the parameters, and the supplied input digests.
void write_report(const AnalysisReport& report, const std::filesystem::path& dir,
                  const std::map<std::string, std::string>& input_digests);

} // namespace geoloc
