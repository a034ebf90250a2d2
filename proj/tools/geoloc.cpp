// geoloc: home-location pipeline over a social follow graph.
//
// Subcommands chain through files: assign-homes -> build-graph ->
// centrality -> estimate -> analyze, with synth providing seeded test
// graphs and pipeline running everything from one config.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 numeric non-convergence.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoloc/analysis.hpp"
#include "geoloc/centrality.hpp"
#include "geoloc/errors.hpp"
#include "geoloc/estimator.hpp"
#include "geoloc/geo.hpp"
#include "geoloc/graph.hpp"
#include "geoloc/home_table.hpp"
#include "geoloc/synth.hpp"
#include "geoloc/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using namespace geoloc;

std::string file_digest_hex(const fs::path& path) { return digest_hex(digest_file(path)); }

void require_exists(const fs::path& path) {
    if (!fs::exists(path)) throw ValidationError("input file does not exist: " + path.string());
}

// ---------------------------------------------------------------- stages

void run_assign_homes(const fs::path& posts_path, const fs::path& regions_path, int min_posts,
                      const fs::path& out_path) {
    require_exists(posts_path);
    require_exists(regions_path);
    const auto posts = read_posts(posts_path);
    const auto regions = RegionSet::load_geojson(regions_path);
    const auto table = assign_home_locations(posts, regions, min_posts);
    table.save(out_path);

    std::vector<UserId> posting_users;
    for (const auto& post : posts) posting_users.push_back(post.user);
    std::sort(posting_users.begin(), posting_users.end());
    posting_users.erase(std::unique(posting_users.begin(), posting_users.end()),
                        posting_users.end());
    std::cout << "assigned " << table.size() << " of " << posting_users.size() << " users\n";
}

void run_build_graph(const fs::path& edges_path, const fs::path& homes_path,
                     const fs::path& out_path) {
    require_exists(edges_path);
    require_exists(homes_path);
    const auto edges = read_edge_list(edges_path);
    const auto homes = HomeLocationTable::load(homes_path);
    const auto located = homes.users();
    const auto graph = build_graph(edges, located);
    graph.save(out_path);
    const auto stats = graph_stats(graph);
    std::cout << "graph: " << stats.node_count << " nodes, " << stats.edge_count
              << " edges, avg degree " << format_double(stats.avg_out_degree) << ", "
              << stats.isolated_count << " isolated\n";
}

void run_centrality(const fs::path& graph_path, CentralityKind kind,
                    const IterationParams& params, const fs::path& out_path) {
    require_exists(graph_path);
    const auto graph = SocialGraph::load(graph_path);
    const std::string graph_digest = file_digest_hex(graph_path);

    CentralityScores scores;
    std::optional<IterationParams> used_params;
    switch (kind) {
        case CentralityKind::in_degree:
            scores = degree_scores(graph, Direction::in);
            break;
        case CentralityKind::out_degree:
            scores = degree_scores(graph, Direction::out);
            break;
        case CentralityKind::pagerank:
            scores = pagerank(graph, params);
            used_params = params;
            break;
        case CentralityKind::hits_authority:
            scores = hits(graph, params).authority;
            used_params = params;
            break;
        case CentralityKind::hits_hub:
            scores = hits(graph, params).hub;
            used_params = params;
            break;
    }
    write_scores(graph, scores, out_path, graph_digest, used_params);
    std::cout << to_string(kind) << ": " << scores.iterations << " iterations, residual "
              << format_double(scores.residual) << '\n';
}

void run_estimate(const fs::path& graph_path, const fs::path& homes_path,
                  const fs::path& results_path, const fs::path& partition_path) {
    require_exists(graph_path);
    require_exists(homes_path);
    const auto graph = SocialGraph::load(graph_path);
    const auto homes = HomeLocationTable::load(homes_path);
    const auto classification = classify_users(graph, homes);
    write_results(classification, results_path);
    write_partition_summary(classification, partition_path);
    std::cout << "easy " << classification.partition.easy.size() << ", hard "
              << classification.partition.hard.size() << ", unknown "
              << classification.partition.unknown.size() << " of " << graph.node_count()
              << " users\n";
}

void run_analyze(const fs::path& graph_path, const fs::path& homes_path,
                 const std::vector<fs::path>& scores_paths, int bins_per_decade,
                 const fs::path& outdir) {
    require_exists(graph_path);
    require_exists(homes_path);
    const auto graph = SocialGraph::load(graph_path);
    const auto homes = HomeLocationTable::load(homes_path);
    const std::string graph_digest = file_digest_hex(graph_path);

    std::map<std::string, std::string> digests;
    digests["graph"] = graph_digest;
    digests["homes"] = file_digest_hex(homes_path);

    std::vector<CentralityScores> scores;
    for (const auto& path : scores_paths) {
        require_exists(path);
        auto loaded = read_scores(graph, path);
        if (loaded.graph_digest != graph_digest)
            throw ValidationError("digest mismatch: scores " + path.string() +
                                  " were computed from a different graph (sidecar digest " +
                                  loaded.graph_digest + ", graph digest " + graph_digest + ")");
        for (const auto& existing : scores)
            if (existing.kind == loaded.scores.kind)
                throw ValidationError("duplicate centrality kind: " +
                                      std::string(to_string(loaded.scores.kind)));
        digests["scores:" + std::string(to_string(loaded.scores.kind))] = file_digest_hex(path);
        scores.push_back(std::move(loaded.scores));
    }
    if (scores.empty()) throw ValidationError("analyze needs at least one scores file");

    const auto classification = classify_users(graph, homes);
    AnalysisOptions options;
    options.bins_per_decade = bins_per_decade;
    const auto report = run_analysis(graph, classification, scores, options);
    write_report(report, outdir, digests);
    std::cout << "report: " << report.kinds.size() * 6 << " series in " << outdir.string() << '\n';
}

void run_synth(const std::string& model, const PlantedPartitionParams& planted,
               const CelebrityGraphParams& celebrity, const fs::path& out_edges,
               const fs::path& out_homes) {
    SynthData data;
    if (model == "planted")
        data = planted_partition(planted);
    else
        data = celebrity_graph(celebrity);
    write_edge_list(data.edges, out_edges);
    data.homes.save(out_homes);
    std::cout << model << ": " << data.homes.size() << " users, " << data.edges.size()
              << " directed edges\n";
}

// ---------------------------------------------------------------- pipeline

template <class F>
void stage(const std::string& name, F body) {
    try {
        body();
    } catch (const ConvergenceError& e) {
        throw ConvergenceError("stage " + name + ": " + e.what(), e.last_iterates, e.iterations,
                               e.residual);
    } catch (const ValidationError& e) {
        throw ValidationError("stage " + name + ": " + e.what());
    } catch (const Error& e) {
        throw Error("stage " + name + ": " + e.what());
    }
}

IterationParams parse_iteration_params(const json& node) {
    IterationParams params;
    if (node.contains("damping")) params.damping = node["damping"].get<double>();
    if (node.contains("tolerance")) params.tolerance = node["tolerance"].get<double>();
    if (node.contains("max_iterations")) params.max_iterations = node["max_iterations"].get<int>();
    return params;
}

void run_pipeline(const fs::path& config_path, const std::string& workdir_flag) {
    require_exists(config_path);
    json config;
    {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw ValidationError("cannot open file: " + config_path.string());
        try {
            in >> config;
        } catch (const json::exception& e) {
            throw ValidationError("invalid config " + config_path.string() + ": " + e.what());
        }
    }

    // Workdir precedence: flag, config, GEOLOC_WORKDIR, ./geoloc_out.
    std::string workdir_str = workdir_flag;
    if (workdir_str.empty()) workdir_str = config.value("workdir", "");
    if (workdir_str.empty()) {
        const char* env = std::getenv("GEOLOC_WORKDIR");
        if (env != nullptr) workdir_str = env;
    }
    if (workdir_str.empty()) workdir_str = "geoloc_out";
    const fs::path workdir(workdir_str);
    fs::create_directories(workdir);

    const std::uint64_t seed = config.value("seed", std::uint64_t{0});
    IterationParams params;
    if (config.contains("centrality")) params = parse_iteration_params(config["centrality"]);
    const int bins_per_decade = config.value("bins_per_decade", 5);
    const int min_posts = config.value("min_posts", 6);

    json manifest;
    manifest["config_digest"] = file_digest_hex(config_path);
    manifest["seed"] = seed;
    manifest["params"] = {{"damping", params.damping},
                          {"tolerance", params.tolerance},
                          {"max_iterations", params.max_iterations},
                          {"bins_per_decade", bins_per_decade},
                          {"min_posts", min_posts}};
    auto& stages = manifest["stages"];
    stages = json::array();
    auto& outputs = manifest["outputs"];
    outputs = json::object();

    fs::path edges_path;
    fs::path homes_path;
    // Manifest entries use workdir-relative names for generated files so the
    // manifest is identical no matter where the workdir lives.
    std::string edges_label;
    std::string homes_label;

    if (config.contains("synth")) {
        const auto& synth_cfg = config["synth"];
        const std::string model = synth_cfg.value("model", "");
        edges_path = workdir / "edges.tsv";
        homes_path = workdir / "homes.tsv";
        edges_label = "edges.tsv";
        homes_label = "homes.tsv";
        stage("synth", [&] {
            if (model == "planted") {
                PlantedPartitionParams p;
                p.communities = synth_cfg.value("communities", p.communities);
                p.size = synth_cfg.value("size", p.size);
                p.p_in = synth_cfg.value("p_in", p.p_in);
                p.p_out = synth_cfg.value("p_out", p.p_out);
                p.reciprocity = synth_cfg.value("reciprocity", p.reciprocity);
                p.seed = seed;
                run_synth(model, p, {}, edges_path, homes_path);
            } else if (model == "celebrity") {
                CelebrityGraphParams p;
                p.cities = synth_cfg.value("cities", p.cities);
                p.fans_per_city = synth_cfg.value("fans_per_city", p.fans_per_city);
                p.celebrities = synth_cfg.value("celebrities", p.celebrities);
                p.fan_follow_celebs = synth_cfg.value("fan_follow_celebs", p.fan_follow_celebs);
                p.local_mutual_degree =
                    synth_cfg.value("local_mutual_degree", p.local_mutual_degree);
                p.celeb_followback = synth_cfg.value("celeb_followback", p.celeb_followback);
                p.seed = seed;
                run_synth(model, {}, p, edges_path, homes_path);
            } else {
                throw ValidationError("synth.model must be 'planted' or 'celebrity'");
            }
        });
        stages.push_back("synth");
    } else {
        if (!config.contains("edges"))
            throw ValidationError("config needs either 'synth' or an 'edges' path");
        edges_path = config["edges"].get<std::string>();
        edges_label = edges_path.string();
        if (config.contains("homes")) {
            homes_path = config["homes"].get<std::string>();
            homes_label = homes_path.string();
        } else if (config.contains("posts") && config.contains("regions")) {
            homes_path = workdir / "homes.tsv";
            homes_label = "homes.tsv";
            stage("assign-homes", [&] {
                run_assign_homes(config["posts"].get<std::string>(),
                                 config["regions"].get<std::string>(), min_posts, homes_path);
            });
            stages.push_back("assign-homes");
        } else {
            throw ValidationError("config needs 'homes' or both 'posts' and 'regions'");
        }
    }
    outputs["edges"] = edges_label;
    outputs["homes"] = homes_label;

    const fs::path graph_path = workdir / "graph.bin";
    stage("build-graph", [&] { run_build_graph(edges_path, homes_path, graph_path); });
    stages.push_back("build-graph");
    outputs["graph"] = "graph.bin";

    std::vector<fs::path> scores_paths;
    for (const CentralityKind kind : kAllCentralityKinds) {
        const std::string name = "scores_" + std::string(to_string(kind)) + ".tsv";
        const fs::path path = workdir / name;
        stage("centrality:" + std::string(to_string(kind)),
              [&] { run_centrality(graph_path, kind, params, path); });
        stages.push_back("centrality:" + std::string(to_string(kind)));
        scores_paths.push_back(path);
        outputs["scores:" + std::string(to_string(kind))] = name;
    }

    const fs::path results_path = workdir / "results.tsv";
    const fs::path partition_path = workdir / "partition.json";
    stage("estimate", [&] { run_estimate(graph_path, homes_path, results_path, partition_path); });
    stages.push_back("estimate");
    outputs["results"] = "results.tsv";
    outputs["partition"] = "partition.json";

    const fs::path report_dir = workdir / "report";
    stage("analyze", [&] {
        run_analyze(graph_path, homes_path, scores_paths, bins_per_decade, report_dir);
    });
    stages.push_back("analyze");
    outputs["report"] = "report";

    auto& digests = manifest["digests"];
    digests = json::object();
    digests["edges"] = file_digest_hex(edges_path);
    digests["homes"] = file_digest_hex(homes_path);
    digests["graph"] = file_digest_hex(graph_path);
    for (const auto& path : scores_paths)
        digests[path.filename().string()] = file_digest_hex(path);
    digests["results"] = file_digest_hex(results_path);
    digests["partition"] = file_digest_hex(partition_path);
    digests["report/manifest.json"] = file_digest_hex(report_dir / "manifest.json");

    std::ofstream out(workdir / "manifest.json", std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + (workdir / "manifest.json").string());
    out << manifest.dump(2) << '\n';
    if (!out) throw ValidationError("write failed: " + (workdir / "manifest.json").string());
    std::cout << "pipeline complete: " << workdir.string() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"home-location and centrality analysis over social follow graphs"};
    app.require_subcommand(1);

    // assign-homes
    std::string posts_path, regions_path, out_path;
    int min_posts = 6;
    auto* assign_cmd =
        app.add_subcommand("assign-homes", "assign each user a home city from geo-tagged posts");
    assign_cmd->add_option("--posts", posts_path, "posts file: user_id<TAB>lat<TAB>lon")
        ->required();
    assign_cmd->add_option("--regions", regions_path, "GeoJSON FeatureCollection of city regions")
        ->required();
    assign_cmd
        ->add_option("--min-posts", min_posts,
                     "posts required in the modal city before a home is assigned")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    assign_cmd->add_option("--out", out_path, "output home table: user_id<TAB>city_id")
        ->required();

    // build-graph
    std::string edges_path, homes_path, graph_out;
    auto* build_cmd = app.add_subcommand(
        "build-graph", "build the simple directed graph restricted to located users");
    build_cmd->add_option("--edges", edges_path, "edge list: follower<TAB>followee")->required();
    build_cmd->add_option("--homes", homes_path, "home table of located users")->required();
    build_cmd->add_option("--out", graph_out, "output graph file (binary)")->required();

    // centrality
    std::string cent_graph, cent_kind, cent_out;
    IterationParams cent_params;
    auto* cent_cmd = app.add_subcommand("centrality", "compute one centrality over the graph");
    cent_cmd->add_option("--graph", cent_graph, "graph file from build-graph")->required();
    cent_cmd->add_option("--kind", cent_kind, "centrality kind")
        ->required()
        ->check(CLI::IsMember(
            {"in_degree", "out_degree", "pagerank", "hits_authority", "hits_hub"}));
    cent_cmd->add_option("--damping", cent_params.damping, "PageRank damping factor")
        ->capture_default_str();
    cent_cmd->add_option("--tol", cent_params.tolerance, "convergence tolerance")
        ->capture_default_str();
    cent_cmd->add_option("--max-iters", cent_params.max_iterations, "iteration cap")
        ->capture_default_str();
    cent_cmd->add_option("--out", cent_out, "output scores file (sidecar at <out>.json)")
        ->required();

    // estimate
    std::string est_graph, est_homes, est_results, est_partition;
    auto* est_cmd = app.add_subcommand(
        "estimate", "friend-majority location estimation and easy/hard/unknown partition");
    est_cmd->add_option("--graph", est_graph, "graph file")->required();
    est_cmd->add_option("--homes", est_homes, "home table")->required();
    est_cmd->add_option("--out-results", est_results, "per-user results file")->required();
    est_cmd->add_option("--out-partition", est_partition, "partition summary JSON")->required();

    // analyze
    std::string ana_graph, ana_homes, ana_outdir;
    std::vector<std::string> ana_scores;
    int bins_per_decade = 5;
    auto* ana_cmd = app.add_subcommand(
        "analyze", "binned score distributions per group and bias vs overall");
    ana_cmd->add_option("--graph", ana_graph, "graph file")->required();
    ana_cmd->add_option("--homes", ana_homes, "home table")->required();
    ana_cmd->add_option("--scores", ana_scores, "score files (repeatable)")
        ->required()
        ->expected(1, -1);
    ana_cmd->add_option("--bins-per-decade", bins_per_decade, "log bins per decade")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ana_cmd->add_option("--outdir", ana_outdir, "report output directory")->required();

    // synth
    std::string synth_model, synth_edges, synth_homes;
    std::uint64_t synth_seed = 0;
    PlantedPartitionParams planted;
    CelebrityGraphParams celebrity;
    auto* synth_cmd = app.add_subcommand("synth", "generate a seeded synthetic graph + homes");
    synth_cmd->add_option("--model", synth_model, "generator model")
        ->required()
        ->check(CLI::IsMember({"planted", "celebrity"}));
    synth_cmd->add_option("--seed", synth_seed, "generator seed")->capture_default_str();
    synth_cmd->add_option("--communities", planted.communities, "planted: community count")
        ->capture_default_str();
    synth_cmd->add_option("--size", planted.size, "planted: users per community")
        ->capture_default_str();
    synth_cmd->add_option("--p-in", planted.p_in, "planted: within-community edge probability")
        ->capture_default_str();
    synth_cmd->add_option("--p-out", planted.p_out, "planted: cross-community edge probability")
        ->capture_default_str();
    synth_cmd->add_option("--reciprocity", planted.reciprocity,
                          "planted: probability a drawn edge is mutual")
        ->capture_default_str();
    synth_cmd->add_option("--cities", celebrity.cities, "celebrity: city count")
        ->capture_default_str();
    synth_cmd->add_option("--fans-per-city", celebrity.fans_per_city, "celebrity: fans per city")
        ->capture_default_str();
    synth_cmd->add_option("--celebrities", celebrity.celebrities, "celebrity: celebrity count")
        ->capture_default_str();
    synth_cmd
        ->add_option("--fan-follow-celebs", celebrity.fan_follow_celebs,
                     "celebrity: celebrities each fan follows")
        ->capture_default_str();
    synth_cmd
        ->add_option("--local-mutual-degree", celebrity.local_mutual_degree,
                     "celebrity: same-city mutual friendships per fan")
        ->capture_default_str();
    synth_cmd
        ->add_option("--celeb-followback", celebrity.celeb_followback,
                     "celebrity: follow-back probability")
        ->capture_default_str();
    synth_cmd->add_option("--out-edges", synth_edges, "output edge list")->required();
    synth_cmd->add_option("--out-homes", synth_homes, "output home table")->required();

    // pipeline
    std::string pipe_config, pipe_workdir;
    auto* pipe_cmd =
        app.add_subcommand("pipeline", "run every stage from one JSON config into a workdir");
    pipe_cmd->add_option("--config", pipe_config, "pipeline config JSON")->required();
    pipe_cmd->add_option("--workdir", pipe_workdir,
                         "working directory (overrides config and GEOLOC_WORKDIR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (assign_cmd->parsed()) {
            run_assign_homes(posts_path, regions_path, min_posts, out_path);
        } else if (build_cmd->parsed()) {
            run_build_graph(edges_path, homes_path, graph_out);
        } else if (cent_cmd->parsed()) {
            run_centrality(cent_graph, *centrality_kind_from_string(cent_kind), cent_params,
                           cent_out);
        } else if (est_cmd->parsed()) {
            run_estimate(est_graph, est_homes, est_results, est_partition);
        } else if (ana_cmd->parsed()) {
            std::vector<fs::path> paths(ana_scores.begin(), ana_scores.end());
            run_analyze(ana_graph, ana_homes, paths, bins_per_decade, ana_outdir);
        } else if (synth_cmd->parsed()) {
            planted.seed = synth_seed;
            celebrity.seed = synth_seed;
            run_synth(synth_model, planted, celebrity, synth_edges, synth_homes);
        } else if (pipe_cmd->parsed()) {
            run_pipeline(pipe_config, pipe_workdir);
        }
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
