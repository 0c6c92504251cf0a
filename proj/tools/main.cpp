#include "commands.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>

namespace app = csrnbrw::app;

namespace {

// Long option names mirror the JSON keys with '-' in place of '_'. When
// --config is given, the file supplies the base and any option actually
// passed (or set through its environment variable) overrides it.
template <typename Config>
Config resolve(CLI::App& sub, const Config& cli, const std::string& config_file) {
    if (config_file.empty()) {
        return cli;
    }
    std::ifstream in(config_file);
    if (!in) {
        throw CLI::ValidationError("--config", "cannot read " + config_file);
    }
    nlohmann::json merged;
    try {
        in >> merged;
    } catch (const nlohmann::json::exception& e) {
        throw CLI::ValidationError("--config", e.what());
    }
    const nlohmann::json given = cli;
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->count() == 0 || opt->get_lnames().empty()) {
            continue;
        }
        auto key = opt->get_lnames().front();
        std::replace(key.begin(), key.end(), '-', '_');
        if (given.contains(key)) {
            merged[key] = given[key];
        }
    }
    merged.erase("command");
    try {
        return merged.get<Config>();
    } catch (const nlohmann::json::exception& e) {
        throw CLI::ValidationError("--config", e.what());
    }
}

// Recorded configs must replay from any working directory.
void absolutize(app::fs::path& p) {
    if (!p.empty()) {
        p = app::fs::absolute(p).lexically_normal();
    }
}

void absolutize(std::optional<app::fs::path>& p) {
    if (p) {
        absolutize(*p);
    }
}

void add_out_dir(CLI::App* sub, app::fs::path& out_dir) {
    sub->add_option("--out-dir", out_dir, "Output directory")->envname("CSRNBRW_OUTPUT_DIR");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Collaboration-strength weighted RNBRW community detection"};
    cli.require_subcommand(1);
    int status = app::kSuccess;

    // ingest
    app::IngestConfig ingest;
    std::string ingest_file;
    std::string countries;
    std::string languages;
    auto* ingest_cmd = cli.add_subcommand("ingest", "Build the collaboration network from commit tables");
    ingest_cmd->add_option("--config", ingest_file, "JSON config file");
    ingest_cmd->add_option("--commits", ingest.commits, "CSV: repo,login,date,added,deleted");
    ingest_cmd->add_option("--countries", countries, "CSV: login,country_code");
    ingest_cmd->add_option("--repo-languages", languages, "CSV: repo,language,bytes");
    ingest_cmd->add_flag("--filter-bots", ingest.filter_bots, "Drop logins ending in the bot suffix");
    ingest_cmd->add_option("--bot-suffix", ingest.bot_suffix, "Suffix matched case-insensitively");
    ingest_cmd->add_flag("--international", ingest.international,
                         "Keep only users with exactly one country code");
    ingest_cmd->add_option("--max-repo-contributors", ingest.max_repo_contributors,
                           "Skip repositories with more contributors");
    add_out_dir(ingest_cmd, ingest.out_dir);
    ingest_cmd->callback([&] {
        if (!countries.empty()) {
            ingest.countries = countries;
        }
        if (!languages.empty()) {
            ingest.repo_languages = languages;
        }
        auto config = resolve(*ingest_cmd, ingest, ingest_file);
        if (config.commits.empty()) {
            throw CLI::RequiredError("--commits");
        }
        absolutize(config.commits);
        absolutize(config.countries);
        absolutize(config.repo_languages);
        status = app::cmd_ingest(config, std::cerr);
    });

    // detect
    app::DetectConfig detect;
    std::string detect_file;
    auto* detect_cmd = cli.add_subcommand("detect", "Louvain and CSRNBRW+Louvain on a weighted edge list");
    detect_cmd->add_option("--config", detect_file, "JSON config file");
    detect_cmd->add_option("--graph", detect.graph, "Edge list written by ingest or synth");
    detect_cmd->add_option("--seed", detect.seed, "Master seed");
    detect_cmd->add_option("--walks-per-edge", detect.walks_per_edge, "Walk budget as a multiple of |E|")
        ->check(CLI::PositiveNumber);
    detect_cmd->add_option("--min-gain", detect.min_gain, "Louvain stopping threshold")
        ->check(CLI::NonNegativeNumber);
    detect_cmd->add_option("--runs", detect.runs, "Louvain restarts; the best modularity wins")
        ->check(CLI::PositiveNumber);
    detect_cmd->add_option("--workers", detect.workers, "Walk threads")
        ->check(CLI::PositiveNumber)
        ->envname("CSRNBRW_WORKERS");
    add_out_dir(detect_cmd, detect.out_dir);
    detect_cmd->callback([&] {
        auto config = resolve(*detect_cmd, detect, detect_file);
        if (config.graph.empty()) {
            throw CLI::RequiredError("--graph");
        }
        absolutize(config.graph);
        status = app::cmd_detect(config, std::cerr);
    });

    // bench
    app::BenchConfig bench;
    std::string bench_file;
    auto* bench_cmd = cli.add_subcommand("bench", "Planted-partition benchmark against the ground truth");
    bench_cmd->add_option("--config", bench_file, "JSON config file");
    bench_cmd->add_option("--sizes", bench.sizes, "Node counts");
    bench_cmd->add_option("--degree-factors", bench.degree_factors, "Average degree as multiples of ln n");
    bench_cmd->add_option("--mixing", bench.mixing, "Mixing parameters");
    bench_cmd->add_option("--community-size", bench.community_size, "Planted community size");
    bench_cmd->add_option("--seeds", bench.seeds, "Replicates per setting");
    bench_cmd->add_option("--seed", bench.seed, "Master seed");
    bench_cmd->add_option("--walks-per-edge", bench.walks_per_edge, "Walk budget as a multiple of |E|")
        ->check(CLI::PositiveNumber);
    bench_cmd->add_option("--min-gain", bench.min_gain, "Louvain stopping threshold");
    bench_cmd->add_option("--workers", bench.workers, "Walk threads")
        ->check(CLI::PositiveNumber)
        ->envname("CSRNBRW_WORKERS");
    add_out_dir(bench_cmd, bench.out_dir);
    bench_cmd->callback([&] { status = app::cmd_bench(resolve(*bench_cmd, bench, bench_file), std::cerr); });

    // stats
    app::StatsConfig stats;
    std::string stats_file;
    std::string stats_countries;
    std::vector<std::string> stats_languages;
    std::size_t comparisons = 0;
    auto* stats_cmd = cli.add_subcommand("stats", "Language and country statistics over a partition");
    stats_cmd->add_option("--config", stats_file, "JSON config file");
    stats_cmd->add_option("--nodes", stats.nodes, "nodes.csv written by ingest");
    stats_cmd->add_option("--partition", stats.partition, "Partition file written by detect");
    stats_cmd->add_option("--languages", stats_languages, "languages_rule*.csv files written by ingest");
    stats_cmd->add_option("--countries", stats_countries, "CSV: login,country_code");
    stats_cmd->add_option("--comparisons", comparisons, "Bonferroni m (default: number of rule pairs)")
        ->check(CLI::PositiveNumber);
    stats_cmd->add_option("--top-languages", stats.top_languages, "Languages tested for country homogeneity");
    add_out_dir(stats_cmd, stats.out_dir);
    stats_cmd->callback([&] {
        stats.languages.assign(stats_languages.begin(), stats_languages.end());
        if (!stats_countries.empty()) {
            stats.countries = stats_countries;
        }
        if (comparisons > 0) {
            stats.comparisons = comparisons;
        }
        auto config = resolve(*stats_cmd, stats, stats_file);
        if (config.nodes.empty() || config.partition.empty()) {
            throw CLI::RequiredError("--nodes and --partition");
        }
        absolutize(config.nodes);
        absolutize(config.partition);
        absolutize(config.countries);
        for (auto& path : config.languages) {
            absolutize(path);
        }
        status = app::cmd_stats(config, std::cerr);
    });

    // synth
    app::SynthConfig synth;
    std::string synth_file;
    std::size_t k = 0;
    double avg_degree = 0.0;
    auto* synth_cmd = cli.add_subcommand("synth", "Sample a planted-partition graph");
    synth_cmd->add_option("--config", synth_file, "JSON config file");
    synth_cmd->add_option("--n", synth.n, "Node count");
    synth_cmd->add_option("--k", k, "Community count (default n / 100)");
    synth_cmd->add_option("--avg-degree", avg_degree, "Expected average degree");
    synth_cmd->add_option("--degree-factor", synth.degree_factor, "Average degree as a multiple of ln n");
    synth_cmd->add_option("--mu", synth.mu, "Mixing parameter");
    synth_cmd->add_option("--seed", synth.seed, "Seed");
    add_out_dir(synth_cmd, synth.out_dir);
    synth_cmd->callback([&] {
        if (k > 0) {
            synth.k = k;
        }
        if (avg_degree > 0.0) {
            synth.avg_degree = avg_degree;
        }
        status = app::cmd_synth(resolve(*synth_cmd, synth, synth_file), std::cerr);
    });

    // replay
    std::string replay_file;
    std::string replay_out;
    auto* replay_cmd = cli.add_subcommand("replay", "Re-run the command recorded in a config.json");
    replay_cmd->add_option("config", replay_file, "config.json from an earlier run")->required();
    replay_cmd->add_option("--out-dir", replay_out, "Write outputs here instead");
    replay_cmd->callback([&] {
        status = app::replay(replay_file,
                             replay_out.empty() ? std::nullopt : std::optional<app::fs::path>(replay_out), std::cerr);
    });

    try {
        cli.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return cli.exit(e);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return app::kInputError;
    }
    return status;
}
