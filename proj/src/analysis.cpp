#include "geoloc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "geoloc/errors.hpp"
#include "geoloc/util.hpp"

namespace geoloc {

std::optional<std::size_t> bin_index(const BinSpec& spec, double score) {
    const std::size_t zero_offset = spec.has_zero_bin ? 1 : 0;
    if (score == 0.0) return spec.has_zero_bin ? std::optional<std::size_t>(0) : std::nullopt;
    if (spec.edges.size() < 2) return std::nullopt;
    if (score < spec.edges.front() || score >= spec.edges.back()) return std::nullopt;
    // upper_bound - 1: the interval whose lower edge is the last one <= score
    const auto it = std::upper_bound(spec.edges.begin(), spec.edges.end(), score);
    const std::size_t interval = static_cast<std::size_t>(it - spec.edges.begin()) - 1;
    return zero_offset + interval;
}

BinSpec make_log_bins(double min_positive, double max_value, int bins_per_decade,
                      bool include_zero_bin) {
    if (!(min_positive > 0.0))
        throw ValidationError("make_log_bins: min_positive must be > 0, got " +
                              format_double(min_positive));
    if (!(max_value >= min_positive))
        throw ValidationError("make_log_bins: max_value must be >= min_positive");
    if (bins_per_decade < 1)
        throw ValidationError("make_log_bins: bins_per_decade must be >= 1");

    const double lo = std::log10(min_positive);
    const double hi = std::log10(max_value);
    auto bins = static_cast<std::size_t>(
        std::max(1.0, std::ceil((hi - lo) * static_cast<double>(bins_per_decade) - 1e-12)));

    BinSpec spec;
    spec.has_zero_bin = include_zero_bin;
    spec.edges.resize(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k)
        spec.edges[k] =
            std::pow(10.0, lo + static_cast<double>(k) / static_cast<double>(bins_per_decade));
    spec.edges.front() = std::min(spec.edges.front(), min_positive);
    // Half-open intervals: nudge the top edge above max_value.
    while (spec.edges.back() <= max_value)
        spec.edges.back() = std::nextafter(spec.edges.back(), std::numeric_limits<double>::infinity());
    for (std::size_t k = 0; k + 1 < spec.edges.size(); ++k)
        if (!(spec.edges[k] < spec.edges[k + 1]))
            throw ValidationError("make_log_bins: degenerate bin edges (range too narrow for " +
                                  std::to_string(bins_per_decade) + " bins per decade)");
    return spec;
}

BinSpec derive_bins(std::span<const double> scores, int bins_per_decade) {
    bool any_zero = false;
    double min_positive = std::numeric_limits<double>::infinity();
    double max_value = 0.0;
    for (const double s : scores) {
        if (!std::isfinite(s) || s < 0.0)
            throw ValidationError("derive_bins: scores must be finite and non-negative, got " +
                                  format_double(s));
        if (s == 0.0) {
            any_zero = true;
        } else {
            min_positive = std::min(min_positive, s);
            max_value = std::max(max_value, s);
        }
    }
    if (max_value == 0.0) {
        // All scores are zero: a lone zero bin covers the population.
        BinSpec spec;
        spec.has_zero_bin = true;
        return spec;
    }
    return make_log_bins(min_positive, max_value, bins_per_decade, any_zero);
}

ScoreDistribution score_distribution_indexed(std::span<const double> values,
                                             std::span<const SocialGraph::NodeIndex> selection,
                                             const BinSpec& spec, const SocialGraph& g) {
    if (selection.empty()) throw ValidationError("score_distribution: empty user set");
    ScoreDistribution dist;
    dist.spec = spec;
    dist.counts.assign(spec.bin_count(), 0);
    dist.total = selection.size();
    for (const auto node : selection) {
        const double score = values[node];
        const auto bin = bin_index(spec, score);
        if (!bin)
            throw ValidationError("score " + format_double(score) + " of user " +
                                  std::to_string(g.user_at(node)) + " falls outside every bin");
        ++dist.counts[*bin];
    }
    return dist;
}

ScoreDistribution score_distribution(const CentralityScores& scores, const SocialGraph& g,
                                     std::span<const UserId> users, const BinSpec& spec) {
    std::vector<SocialGraph::NodeIndex> selection;
    selection.reserve(users.size());
    for (const UserId user : users) {
        const auto idx = g.index_of(user);
        if (!idx) throw ValidationError("unknown user " + std::to_string(user));
        selection.push_back(*idx);
    }
    return score_distribution_indexed(scores.values, selection, spec, g);
}

BiasSeries bias(const ScoreDistribution& group_dist, const ScoreDistribution& overall_dist,
                std::string group_label) {
    if (group_dist.spec != overall_dist.spec)
        throw ValidationError("bias: distributions use different bin specs");
    BiasSeries series;
    series.group = std::move(group_label);
    series.values.resize(group_dist.counts.size());
    for (std::size_t i = 0; i < group_dist.counts.size(); ++i) {
        const double a = overall_dist.fraction(i);
        const double b = group_dist.fraction(i);
        if (a > 0.0 && b > 0.0) series.values[i] = std::log10(b / a);
    }
    return series;
}

namespace {

std::vector<SocialGraph::NodeIndex> nodes_with_outcome(const Classification& classification,
                                                       EstimationOutcome outcome) {
    std::vector<SocialGraph::NodeIndex> nodes;
    for (std::size_t i = 0; i < classification.results.size(); ++i)
        if (classification.results[i].outcome == outcome)
            nodes.push_back(static_cast<SocialGraph::NodeIndex>(i));
    return nodes;
}

ScoreDistribution distribution_or_empty(std::span<const double> values,
                                        std::span<const SocialGraph::NodeIndex> selection,
                                        const BinSpec& spec, const SocialGraph& g) {
    if (selection.empty()) {
        // Empty group: all-zero series so every report carries the same four
        // distribution files regardless of the partition.
        ScoreDistribution dist;
        dist.spec = spec;
        dist.counts.assign(spec.bin_count(), 0);
        dist.total = 0;
        return dist;
    }
    return score_distribution_indexed(values, selection, spec, g);
}

} // namespace

AnalysisReport run_analysis(const SocialGraph& g, const Classification& classification,
                            std::span<const CentralityScores> scores,
                            const AnalysisOptions& options) {
    if (classification.results.size() != g.node_count())
        throw ValidationError("run_analysis: classification does not match graph size");

    AnalysisReport report;
    report.bins_per_decade = options.bins_per_decade;
    report.easy_count = classification.partition.easy.size();
    report.hard_count = classification.partition.hard.size();
    report.unknown_count = classification.partition.unknown.size();
    report.total_count = g.node_count();

    std::vector<SocialGraph::NodeIndex> all(g.node_count());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<SocialGraph::NodeIndex>(i);
    const auto easy_nodes = nodes_with_outcome(classification, EstimationOutcome::easy);
    const auto hard_nodes = nodes_with_outcome(classification, EstimationOutcome::hard);
    const auto unknown_nodes = nodes_with_outcome(classification, EstimationOutcome::unknown);

    for (const CentralityScores& s : scores) {
        if (s.values.size() != g.node_count())
            throw ValidationError("run_analysis: score vector does not match graph size");
        AnalysisReport::KindBlock block;
        block.kind = s.kind;
        block.bins = derive_bins(s.values, options.bins_per_decade);
        block.overall = score_distribution_indexed(s.values, all, block.bins, g);
        block.easy = distribution_or_empty(s.values, easy_nodes, block.bins, g);
        block.hard = distribution_or_empty(s.values, hard_nodes, block.bins, g);
        block.unknown = distribution_or_empty(s.values, unknown_nodes, block.bins, g);
        block.bias_easy = bias(block.easy, block.overall, "easy");
        block.bias_hard = bias(block.hard, block.overall, "hard");
        report.kinds.push_back(std::move(block));
    }
    return report;
}

namespace {

void write_series_csv(const std::filesystem::path& path, const ScoreDistribution& dist,
                      const BiasSeries* bias_values) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path.string());
    out << "bin_lower,bin_upper,count,fraction,bias_or_NA\n";
    const std::size_t zero_offset = dist.spec.has_zero_bin ? 1 : 0;
    for (std::size_t bin = 0; bin < dist.counts.size(); ++bin) {
        double lower = 0.0;
        double upper = 0.0;
        if (!(dist.spec.has_zero_bin && bin == 0)) {
            lower = dist.spec.edges[bin - zero_offset];
            upper = dist.spec.edges[bin - zero_offset + 1];
        }
        out << format_double(lower) << ',' << format_double(upper) << ',' << dist.counts[bin]
            << ',' << format_double(dist.fraction(bin)) << ',';
        if (bias_values != nullptr && bias_values->values[bin])
            out << format_double(*bias_values->values[bin]);
        else
            out << "NA";
        out << '\n';
    }
    if (!out) throw ValidationError("write failed: " + path.string());
}

} // namespace

void write_report(const AnalysisReport& report, const std::filesystem::path& dir,
                  const std::map<std::string, std::string>& input_digests) {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest;
    manifest["bins_per_decade"] = report.bins_per_decade;
    manifest["groups"] = {{"easy", report.easy_count},
                          {"hard", report.hard_count},
                          {"unknown", report.unknown_count},
                          {"total", report.total_count}};
    manifest["inputs"] = input_digests;
    auto& series_list = manifest["series"];
    series_list = nlohmann::json::array();

    for (const auto& block : report.kinds) {
        const std::string kind_name(to_string(block.kind));
        const auto add_series = [&](const std::string& series, const ScoreDistribution& dist,
                                    const BiasSeries* bias_values) {
            const std::string file = kind_name + "_" + series + ".csv";
            write_series_csv(dir / file, dist, bias_values);
            series_list.push_back({{"kind", kind_name},
                                   {"series", series},
                                   {"file", file},
                                   {"bins", dist.counts.size()},
                                   {"total", dist.total}});
        };
        add_series("overall", block.overall, nullptr);
        add_series("easy", block.easy, nullptr);
        add_series("hard", block.hard, nullptr);
        add_series("unknown", block.unknown, nullptr);
        add_series("bias_easy", block.easy, &block.bias_easy);
        add_series("bias_hard", block.hard, &block.bias_hard);
    }

    std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + (dir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
    if (!out) throw ValidationError("write failed: " + (dir / "manifest.json").string());
}

} // namespace geoloc
