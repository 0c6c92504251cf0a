#include "commands.hpp"

#include "csrnbrw/analysis.hpp"
#include "csrnbrw/attributes.hpp"
#include "csrnbrw/error.hpp"
#include "csrnbrw/graph.hpp"
#include "csrnbrw/ingest.hpp"
#include "csrnbrw/louvain.hpp"
#include "csrnbrw/pipeline.hpp"
#include "csrnbrw/rng.hpp"
#include "csrnbrw/stats.hpp"
#include "csrnbrw/synth.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace csrnbrw::app {

namespace {

// Bad or unreadable input; mapped to kInputError.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError(fmt::format("cannot read {}", path.string()));
    }
    return in;
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError(fmt::format("cannot write {}", path.string()));
    }
    body(out);
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    write_file(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

void prepare_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw InputError(fmt::format("cannot create output directory {}: {}", dir.string(), ec.message()));
    }
}

template <typename Config>
void write_config(const fs::path& dir, std::string_view command, const Config& config) {
    nlohmann::json j = config;
    j["command"] = command;
    write_json(dir / "config.json", j);
}

// Runs body, translating exceptions into exit codes.
int guarded(std::ostream& log, const std::function<int()>& body) {
    try {
        return body();
    } catch (const InputError& e) {
        fmt::print(log, "error: {}\n", e.what());
        return kInputError;
    } catch (const ValidationError& e) {
        fmt::print(log, "error: {}\n", e.what());
        return kInputError;
    } catch (const std::ios_base::failure& e) {
        fmt::print(log, "error: {}\n", e.what());
        return kInputError;
    }
}

std::string rule_name(LanguageRule rule) { return fmt::format("rule{}", static_cast<int>(rule)); }

nlohmann::json graph_metrics(const Graph& g) {
    nlohmann::json j;
    j["nodes"] = g.node_count();
    j["edges"] = g.edge_count();
    j["density"] = g.node_count() >= 2 ? nlohmann::json(density(g)) : nlohmann::json(nullptr);
    j["transitivity"] = transitivity(g);
    j["average_degree"] =
        g.node_count() ? 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count()) : 0.0;
    const auto components = connected_components(g);
    const auto sizes = components.sizes();
    const std::size_t largest = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
    j["components"] = components.community_count();
    j["largest_component_fraction"] =
        g.node_count() ? static_cast<double>(largest) / static_cast<double>(g.node_count()) : 0.0;
    return j;
}

std::vector<std::string> read_nodes(const fs::path& path) {
    auto in = open_input(path);
    std::string line;
    if (!std::getline(in, line) || line != "node_id,login") {
        throw InputError(fmt::format("{}: expected header `node_id,login`", path.string()));
    }
    std::vector<std::string> logins;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        std::size_t id = 0;
        if (comma == std::string::npos || !(std::istringstream(line.substr(0, comma)) >> id) ||
            id != logins.size()) {
            throw InputError(fmt::format("{}: malformed node row `{}`", path.string(), line));
        }
        logins.push_back(line.substr(comma + 1));
    }
    return logins;
}

void write_nodes(const fs::path& path, const std::vector<std::string>& logins) {
    write_file(path, [&](std::ostream& out) {
        fmt::print(out, "node_id,login\n");
        for (std::size_t v = 0; v < logins.size(); ++v) {
            fmt::print(out, "{},{}\n", v, logins[v]);
        }
    });
}

nlohmann::json method_summary(const Graph& sc_graph, const Partition& p, std::optional<double> q,
                              const fs::path& dir, std::string_view tag) {
    nlohmann::json j;
    const auto sizes = community_sizes(p);
    j["communities"] = p.community_count();
    j["modularity"] = q ? nlohmann::json(*q) : nlohmann::json(nullptr);
    j["size_histogram"] = csrnbrw::to_json(sizes);
    const std::size_t largest = sizes.empty() ? 0 : sizes.rbegin()->first;
    j["largest_community_fraction"] =
        p.node_count() ? static_cast<double>(largest) / static_cast<double>(p.node_count()) : 0.0;
    j["dunbar_coverage"] = dunbar_coverage(p);
    j["resolution_audit"] = csrnbrw::to_json(resolution_audit(sc_graph, p));

    const Graph network = community_network(sc_graph, p);
    nlohmann::json net;
    net["nodes"] = network.node_count();
    net["edges"] = network.edge_count();
    net["total_weight"] = network.total_weight();
    std::vector<std::uint64_t> degrees;
    for (NodeId c = 0; c < network.node_count(); ++c) {
        if (network.degree(c) > 0) {
            degrees.push_back(network.degree(c));
        }
    }
    try {
        net["degree_power_law"] = csrnbrw::to_json(fit_power_law(degrees));
    } catch (const InsufficientDataError& e) {
        net["degree_power_law"] = {{"error", e.what()}};
    }
    j["community_network"] = net;

    write_file(dir / fmt::format("sizes_{}.csv", tag),
               [&](std::ostream& out) { write_histogram_csv(out, sizes, "size", "count"); });
    write_file(dir / fmt::format("community_degrees_{}.csv", tag),
               [&](std::ostream& out) { write_histogram_csv(out, degree_histogram(network), "degree", "count"); });
    return j;
}

double mean_of(const std::vector<double>& xs) {
    return xs.empty() ? 0.0 : std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sd_of(const std::vector<double>& xs) {
    if (xs.size() < 2) {
        return 0.0;
    }
    const double m = mean_of(xs);
    double ss = 0.0;
    for (const double x : xs) {
        ss += (x - m) * (x - m);
    }
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

} // namespace

// ---------------------------------------------------------------------------
// Config serialization

namespace {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& field) {
    if (j.contains(key) && !j.at(key).is_null()) {
        field = j.at(key).get<T>();
    }
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, std::optional<T>& field) {
    if (j.contains(key) && !j.at(key).is_null()) {
        field = j.at(key).get<T>();
    } else {
        field.reset();
    }
}

nlohmann::json path_or_null(const std::optional<fs::path>& p) {
    return p ? nlohmann::json(p->string()) : nlohmann::json(nullptr);
}

} // namespace

void to_json(nlohmann::json& j, const IngestConfig& c) {
    j = {{"commits", c.commits.string()},
         {"countries", path_or_null(c.countries)},
         {"repo_languages", path_or_null(c.repo_languages)},
         {"filter_bots", c.filter_bots},
         {"bot_suffix", c.bot_suffix},
         {"international", c.international},
         {"max_repo_contributors", c.max_repo_contributors},
         {"out_dir", c.out_dir.string()}};
}

void from_json(const nlohmann::json& j, IngestConfig& c) {
    c.commits = j.at("commits").get<std::string>();
    std::optional<std::string> countries;
    std::optional<std::string> languages;
    read_opt(j, "countries", countries);
    read_opt(j, "repo_languages", languages);
    c.countries = countries ? std::optional<fs::path>(*countries) : std::nullopt;
    c.repo_languages = languages ? std::optional<fs::path>(*languages) : std::nullopt;
    read_opt(j, "filter_bots", c.filter_bots);
    read_opt(j, "bot_suffix", c.bot_suffix);
    read_opt(j, "international", c.international);
    read_opt(j, "max_repo_contributors", c.max_repo_contributors);
    std::string out = c.out_dir.string();
    read_opt(j, "out_dir", out);
    c.out_dir = out;
}

void to_json(nlohmann::json& j, const DetectConfig& c) {
    j = {{"graph", c.graph.string()},     {"seed", c.seed},   {"walks_per_edge", c.walks_per_edge},
         {"min_gain", c.min_gain},        {"runs", c.runs},   {"workers", c.workers},
         {"out_dir", c.out_dir.string()}};
}

void from_json(const nlohmann::json& j, DetectConfig& c) {
    c.graph = j.at("graph").get<std::string>();
    read_opt(j, "seed", c.seed);
    read_opt(j, "walks_per_edge", c.walks_per_edge);
    read_opt(j, "min_gain", c.min_gain);
    read_opt(j, "runs", c.runs);
    read_opt(j, "workers", c.workers);
    std::string out = c.out_dir.string();
    read_opt(j, "out_dir", out);
    c.out_dir = out;
}

void to_json(nlohmann::json& j, const BenchConfig& c) {
    j = {{"sizes", c.sizes},
         {"degree_factors", c.degree_factors},
         {"mixing", c.mixing},
         {"community_size", c.community_size},
         {"seeds", c.seeds},
         {"seed", c.seed},
         {"walks_per_edge", c.walks_per_edge},
         {"min_gain", c.min_gain},
         {"workers", c.workers},
         {"out_dir", c.out_dir.string()}};
}

void from_json(const nlohmann::json& j, BenchConfig& c) {
    read_opt(j, "sizes", c.sizes);
    read_opt(j, "degree_factors", c.degree_factors);
    read_opt(j, "mixing", c.mixing);
    read_opt(j, "community_size", c.community_size);
    read_opt(j, "seeds", c.seeds);
    read_opt(j, "seed", c.seed);
    read_opt(j, "walks_per_edge", c.walks_per_edge);
    read_opt(j, "min_gain", c.min_gain);
    read_opt(j, "workers", c.workers);
    std::string out = c.out_dir.string();
    read_opt(j, "out_dir", out);
    c.out_dir = out;
}

void to_json(nlohmann::json& j, const StatsConfig& c) {
    std::vector<std::string> languages;
    for (const auto& p : c.languages) {
        languages.push_back(p.string());
    }
    j = {{"nodes", c.nodes.string()},
         {"partition", c.partition.string()},
         {"languages", languages},
         {"countries", path_or_null(c.countries)},
         {"comparisons", c.comparisons ? nlohmann::json(*c.comparisons) : nlohmann::json(nullptr)},
         {"top_languages", c.top_languages},
         {"out_dir", c.out_dir.string()}};
}

void from_json(const nlohmann::json& j, StatsConfig& c) {
    c.nodes = j.at("nodes").get<std::string>();
    c.partition = j.at("partition").get<std::string>();
    c.languages.clear();
    for (const auto& p : j.at("languages")) {
        c.languages.emplace_back(p.get<std::string>());
    }
    std::optional<std::string> countries;
    read_opt(j, "countries", countries);
    c.countries = countries ? std::optional<fs::path>(*countries) : std::nullopt;
    read_opt(j, "comparisons", c.comparisons);
    read_opt(j, "top_languages", c.top_languages);
    std::string out = c.out_dir.string();
    read_opt(j, "out_dir", out);
    c.out_dir = out;
}

void to_json(nlohmann::json& j, const SynthConfig& c) {
    j = {{"n", c.n},
         {"k", c.k ? nlohmann::json(*c.k) : nlohmann::json(nullptr)},
         {"avg_degree", c.avg_degree ? nlohmann::json(*c.avg_degree) : nlohmann::json(nullptr)},
         {"degree_factor", c.degree_factor},
         {"mu", c.mu},
         {"seed", c.seed},
         {"out_dir", c.out_dir.string()}};
}

void from_json(const nlohmann::json& j, SynthConfig& c) {
    read_opt(j, "n", c.n);
    read_opt(j, "k", c.k);
    read_opt(j, "avg_degree", c.avg_degree);
    read_opt(j, "degree_factor", c.degree_factor);
    read_opt(j, "mu", c.mu);
    read_opt(j, "seed", c.seed);
    std::string out = c.out_dir.string();
    read_opt(j, "out_dir", out);
    c.out_dir = out;
}

// ---------------------------------------------------------------------------
// ingest

int cmd_ingest(const IngestConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        auto commits_in = open_input(config.commits);
        std::optional<std::ifstream> countries_in;
        std::optional<std::ifstream> languages_in;
        if (config.countries) {
            countries_in = open_input(*config.countries);
        }
        if (config.repo_languages) {
            languages_in = open_input(*config.repo_languages);
        }
        if (config.international && !config.countries) {
            throw InputError("--international needs a country table");
        }

        auto parsed = parse_commits(commits_in);
        nlohmann::json report;
        report["commit_rows"] = parsed.records.size() + parsed.skipped;
        report["rows_skipped"] = parsed.skipped;
        report["skipped_lines"] = parsed.skipped_lines;

        std::vector<CommitRecord> commits = std::move(parsed.records);
        std::set<std::string> users;
        for (const auto& r : commits) {
            users.insert(r.login);
        }
        report["users"] = users.size();
        report["bots_removed"] = 0;
        if (config.filter_bots) {
            auto filtered = filter_bots(std::move(commits), config.bot_suffix);
            commits = std::move(filtered.records);
            report["bots_removed"] = filtered.removed_users;
        }
        std::size_t remaining_users = 0;
        {
            std::set<std::string_view> left;
            for (const auto& r : commits) {
                left.insert(r.login);
            }
            remaining_users = left.size();
        }

        Collaboration net = project_collaboration(commits, {config.max_repo_contributors});
        for (const auto& repo : net.skipped_repos) {
            fmt::print(log, "warning: skipped repository {} (over {} contributors)\n", repo,
                       config.max_repo_contributors);
        }
        report["repos_skipped"] = net.skipped_repos;
        report["isolates_removed"] = remaining_users - net.logins.size();

        std::vector<UserCountryRecord> countries;
        if (countries_in) {
            auto parsed_countries = parse_countries(*countries_in);
            report["country_rows_skipped"] = parsed_countries.skipped;
            countries = std::move(parsed_countries.records);
        }
        if (config.international) {
            const std::size_t before = net.logins.size();
            net = subset_international(net, countries);
            report["international_nodes_removed"] = before - net.logins.size();
        }
        report["network"] = graph_metrics(net.graph);

        prepare_out_dir(config.out_dir);
        write_file(config.out_dir / "graph.edges", [&](std::ostream& out) { write_edge_list(out, net.graph); });
        write_nodes(config.out_dir / "nodes.csv", net.logins);

        if (countries_in) {
            const auto unique = unique_countries(countries);
            std::size_t mapped = 0;
            write_file(config.out_dir / "node_countries.csv", [&](std::ostream& out) {
                fmt::print(out, "login,country_code\n");
                for (const auto& login : net.logins) {
                    const auto it = unique.find(login);
                    if (it != unique.end()) {
                        fmt::print(out, "{},{}\n", login, it->second);
                        ++mapped;
                    }
                }
            });
            report["nodes_with_country"] = mapped;
        }

        if (languages_in) {
            auto parsed_languages = parse_repo_languages(*languages_in);
            const auto repos = single_language_repos(parsed_languages.records);
            report["language_rows_skipped"] = parsed_languages.skipped;
            report["single_language_repo_fraction"] = repos.retained_fraction();
            const std::set<std::string_view> in_graph(net.logins.begin(), net.logins.end());
            for (const auto rule : {LanguageRule::bytes, LanguageRule::commits, LanguageRule::majority,
                                    LanguageRule::ownership}) {
                auto m = assign_languages(rule, commits, repos);
                std::erase_if(m.language, [&](const auto& entry) { return !in_graph.contains(entry.first); });
                write_file(config.out_dir / fmt::format("languages_{}.csv", rule_name(rule)),
                           [&](std::ostream& out) { write_language_csv(out, m); });
                report["nodes_with_language"][rule_name(rule)] = m.language.size();
            }
        }

        write_json(config.out_dir / "ingest_report.json", report);
        write_config(config.out_dir, "ingest", config);
        fmt::print(log, "ingest: {} nodes, {} edges -> {}\n", net.graph.node_count(), net.graph.edge_count(),
                   config.out_dir.string());
        return kSuccess;
    });
}

// ---------------------------------------------------------------------------
// detect

int cmd_detect(const DetectConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        auto in = open_input(config.graph);
        const Graph g = read_edge_list(in);
        if (g.edge_count() == 0 || !(g.total_weight() > 0.0)) {
            fmt::print(log, "error: {} has no weighted edges\n", config.graph.string());
            return static_cast<int>(kDegenerateGraph);
        }

        DetectionOptions options;
        options.seed = config.seed;
        options.walks_per_edge = config.walks_per_edge;
        options.min_gain = config.min_gain;
        options.runs = config.runs;
        options.workers = config.workers;
        const Detection d = detect_communities(g, options);

        prepare_out_dir(config.out_dir);
        write_file(config.out_dir / "partition_louvain.txt", [&](std::ostream& out) {
            write_partition(out, d.plain.partition, {config.seed, config.min_gain, d.plain.modularity, "louvain"});
        });
        write_file(config.out_dir / "partition_csrnbrw.txt", [&](std::ostream& out) {
            write_partition(out, d.weighted,
                            {config.seed, config.min_gain, d.weighted_modularity.value_or(0.0), "csrnbrw+louvain"});
        });
        write_file(config.out_dir / "weights.txt", [&](std::ostream& out) {
            write_weight_dump(out, g, d.reweighting.pi, d.reweighting.csrnbrw);
        });

        nlohmann::json summary;
        summary["graph"] = graph_metrics(g);
        summary["walks"] = {{"total", d.reweighting.counts.total_walks},
                            {"completed_cycles", d.reweighting.counts.completed_cycles},
                            {"workers", config.workers}};
        summary["louvain"] = method_summary(g, d.plain.partition, d.plain.modularity, config.out_dir, "louvain");
        summary["csrnbrw_louvain"] =
            method_summary(g, d.weighted, d.weighted_modularity, config.out_dir, "csrnbrw");
        if (!d.weighted_modularity) {
            summary["warnings"].push_back("no walk closed a cycle; CSRNBRW partition is all singletons");
        }
        summary["comparison"] = {
            {"size_set_similarity",
             size_set_similarity(community_sizes(d.plain.partition), community_sizes(d.weighted))},
            {"nmi", nmi(d.plain.partition, d.weighted)}};
        write_json(config.out_dir / "summary.json", summary);
        write_config(config.out_dir, "detect", config);
        fmt::print(log, "detect: louvain {} communities, csrnbrw+louvain {} communities -> {}\n",
                   d.plain.partition.community_count(), d.weighted.community_count(), config.out_dir.string());
        return static_cast<int>(kSuccess);
    });
}

// ---------------------------------------------------------------------------
// bench

int cmd_bench(const BenchConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        if (config.community_size < 2) {
            throw InputError("community size must be at least 2");
        }
        prepare_out_dir(config.out_dir);
        nlohmann::json rows = nlohmann::json::array();
        nlohmann::json groups = nlohmann::json::array();
        std::ostringstream csv;
        fmt::print(csv,
                   "n,k,degree_factor,avg_degree,mu,seed,edges,nmi_louvain,nmi_rnbrw,communities_louvain,"
                   "communities_rnbrw,above_threshold_louvain,above_threshold_rnbrw\n");
        std::uint64_t case_index = 0;
        for (const auto n : config.sizes) {
            for (const double factor : config.degree_factors) {
                for (const double mu : config.mixing) {
                    std::vector<double> plain_scores;
                    std::vector<double> weighted_scores;
                    for (std::size_t s = 0; s < config.seeds; ++s, ++case_index) {
                        const std::uint64_t seed = derive_seed(config.seed, case_index);
                        PlantedSpec spec;
                        spec.n = n;
                        spec.k = std::max<std::size_t>(2, n / config.community_size);
                        spec.avg_degree = factor * std::log(static_cast<double>(n));
                        spec.mu = mu;
                        spec.seed = derive_seed(seed, stage::generator);
                        const auto planted = planted_partition(spec);

                        DetectionOptions options;
                        options.seed = seed;
                        options.walks_per_edge = config.walks_per_edge;
                        options.min_gain = config.min_gain;
                        options.workers = config.workers;
                        const auto d = detect_communities(planted.graph, options);
                        const double plain_nmi = nmi(d.plain.partition, planted.truth);
                        const double weighted_nmi = nmi(d.weighted, planted.truth);
                        const auto plain_audit = resolution_audit(planted.graph, d.plain.partition);
                        const auto weighted_audit = resolution_audit(planted.graph, d.weighted);
                        plain_scores.push_back(plain_nmi);
                        weighted_scores.push_back(weighted_nmi);

                        rows.push_back({{"n", n},
                                        {"k", spec.k},
                                        {"degree_factor", factor},
                                        {"avg_degree", spec.avg_degree},
                                        {"mu", mu},
                                        {"seed", seed},
                                        {"edges", planted.graph.edge_count()},
                                        {"nmi_louvain", plain_nmi},
                                        {"nmi_rnbrw", weighted_nmi},
                                        {"communities_louvain", d.plain.partition.community_count()},
                                        {"communities_rnbrw", d.weighted.community_count()},
                                        {"resolution_louvain", csrnbrw::to_json(plain_audit)},
                                        {"resolution_rnbrw", csrnbrw::to_json(weighted_audit)}});
                        fmt::print(csv, "{},{},{},{},{},{},{},{},{},{},{},{},{}\n", n, spec.k, factor,
                                   spec.avg_degree, mu, seed, planted.graph.edge_count(), plain_nmi, weighted_nmi,
                                   d.plain.partition.community_count(), d.weighted.community_count(),
                                   plain_audit.above_node_threshold, weighted_audit.above_node_threshold);
                        fmt::print(log, "bench n={} d={:.3f} mu={} seed#{}: louvain {:.3f}, rnbrw+louvain {:.3f}\n", n,
                                   spec.avg_degree, mu, s, plain_nmi, weighted_nmi);
                    }
                    groups.push_back({{"n", n},
                                      {"degree_factor", factor},
                                      {"mu", mu},
                                      {"runs", plain_scores.size()},
                                      {"nmi_louvain_mean", mean_of(plain_scores)},
                                      {"nmi_louvain_sd", sd_of(plain_scores)},
                                      {"nmi_rnbrw_mean", mean_of(weighted_scores)},
                                      {"nmi_rnbrw_sd", sd_of(weighted_scores)}});
                }
            }
        }
        write_file(config.out_dir / "bench.csv", [&](std::ostream& out) { out << csv.str(); });
        write_json(config.out_dir / "bench.json", {{"runs", rows}, {"summary", groups}});
        write_config(config.out_dir, "bench", config);
        return static_cast<int>(kSuccess);
    });
}

// ---------------------------------------------------------------------------
// stats

int cmd_stats(const StatsConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        const auto logins = read_nodes(config.nodes);
        auto partition_in = open_input(config.partition);
        const Partition p = read_partition(partition_in);
        if (p.node_count() != logins.size()) {
            throw InputError(fmt::format("partition covers {} nodes, node table lists {}", p.node_count(),
                                         logins.size()));
        }
        if (config.languages.empty()) {
            fmt::print(log, "error: no language assignment tables given\n");
            return static_cast<int>(kMissingAttributes);
        }
        std::vector<UserLanguageMap> maps;
        for (const auto& path : config.languages) {
            auto in = open_input(path);
            maps.push_back(read_language_csv(in));
            if (maps.back().language.empty()) {
                fmt::print(log, "error: {} assigns no languages\n", path.string());
                return static_cast<int>(kMissingAttributes);
            }
        }
        std::optional<std::map<std::string, std::string>> countries;
        if (config.countries) {
            auto in = open_input(*config.countries);
            countries = unique_countries(parse_countries(in).records);
        }

        prepare_out_dir(config.out_dir);
        nlohmann::json report;
        report["communities"] = p.community_count();

        std::vector<std::vector<double>> distinct;
        for (const auto& m : maps) {
            const auto name = rule_name(m.rule);
            report["language_proportions"][name] = language_proportions(m);
            const auto per_node = node_languages(logins, m);
            const auto d = distinct_languages_per_community(p, per_node);
            std::map<std::size_t, std::size_t> histogram;
            for (const auto c : d.counts) {
                ++histogram[c];
            }
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& [languages, communities] : histogram) {
                rows.push_back({{"distinct_languages", languages}, {"communities", communities}});
            }
            report["distinct_languages"][name] = {{"histogram", rows},
                                                  {"communities_without_language", d.no_languages.size()}};
            write_file(config.out_dir / fmt::format("distinct_languages_{}.csv", name), [&](std::ostream& out) {
                write_histogram_csv(out, histogram, "distinct_languages", "communities");
            });
            distinct.emplace_back(d.counts.begin(), d.counts.end());
        }

        nlohmann::json tests = nlohmann::json::array();
        std::vector<double> raw;
        std::vector<std::size_t> tested;
        for (std::size_t a = 0; a < maps.size(); ++a) {
            for (std::size_t b = a + 1; b < maps.size(); ++b) {
                nlohmann::json entry = {{"a", rule_name(maps[a].rule)}, {"b", rule_name(maps[b].rule)}};
                try {
                    const auto w = wilcoxon_signed_rank(distinct[a], distinct[b]);
                    entry["wilcoxon"] = csrnbrw::to_json(w);
                    raw.push_back(w.p);
                    tested.push_back(tests.size());
                } catch (const InsufficientDataError& e) {
                    entry["error"] = e.what();
                }
                tests.push_back(entry);
            }
        }
        const std::size_t pairs = maps.size() * (maps.size() - 1) / 2;
        const std::size_t m = std::max(config.comparisons.value_or(pairs), raw.size());
        const auto adjusted = bonferroni(raw, m);
        for (std::size_t i = 0; i < tested.size(); ++i) {
            tests[tested[i]]["p_adjusted"] = adjusted[i];
        }
        report["pairwise_wilcoxon"] = {{"comparisons", m}, {"tests", tests}};

        if (countries) {
            const auto per_node = node_languages(logins, maps.front());
            std::map<std::string, std::size_t> popularity;
            for (const auto& lang : per_node) {
                if (lang) {
                    ++popularity[*lang];
                }
            }
            std::vector<std::pair<std::string, std::size_t>> ranked(popularity.begin(), popularity.end());
            std::stable_sort(ranked.begin(), ranked.end(),
                             [](const auto& x, const auto& y) { return x.second > y.second; });
            if (ranked.size() > config.top_languages) {
                ranked.resize(config.top_languages);
            }
            nlohmann::json chi = nlohmann::json::array();
            for (const auto& [language, users] : ranked) {
                ContingencyTable table;
                std::map<std::string, std::size_t> row_of;
                for (const auto& [login, code] : *countries) {
                    if (!row_of.contains(code)) {
                        row_of.emplace(code, 0);
                    }
                }
                std::size_t r = 0;
                for (auto& [code, index] : row_of) {
                    index = r++;
                    table.row_labels.push_back(code);
                }
                table.counts.assign(row_of.size(), std::vector<std::uint64_t>(p.community_count(), 0));
                for (NodeId v = 0; v < logins.size(); ++v) {
                    const auto it = countries->find(logins[v]);
                    if (per_node[v] && *per_node[v] == language && it != countries->end()) {
                        ++table.counts[row_of.at(it->second)][p[v]];
                    }
                }
                nlohmann::json entry = {{"language", language}, {"users", users}};
                try {
                    entry["chi_square"] = csrnbrw::to_json(chi_square_homogeneity(table));
                } catch (const InsufficientDataError& e) {
                    entry["error"] = e.what();
                }
                chi.push_back(entry);
            }
            report["country_homogeneity"] = {{"rule", rule_name(maps.front().rule)}, {"languages", chi}};
        }

        write_json(config.out_dir / "stats.json", report);
        write_config(config.out_dir, "stats", config);
        fmt::print(log, "stats: {} rules over {} communities -> {}\n", maps.size(), p.community_count(),
                   config.out_dir.string());
        return static_cast<int>(kSuccess);
    });
}

// ---------------------------------------------------------------------------
// synth

int cmd_synth(const SynthConfig& config, std::ostream& log) {
    return guarded(log, [&] {
        PlantedSpec spec;
        spec.n = config.n;
        spec.k = config.k.value_or(std::max<std::size_t>(2, config.n / 100));
        spec.avg_degree = config.avg_degree.value_or(config.degree_factor * std::log(static_cast<double>(config.n)));
        spec.mu = config.mu;
        spec.seed = config.seed;
        const auto planted = planted_partition(spec);

        prepare_out_dir(config.out_dir);
        write_file(config.out_dir / "graph.edges", [&](std::ostream& out) { write_edge_list(out, planted.graph); });
        write_file(config.out_dir / "truth.txt",
                   [&](std::ostream& out) { write_partition(out, planted.truth, {config.seed, 0.0, 0.0, "planted"}); });
        nlohmann::json report = {
            {"n", spec.n},       {"k", spec.k},         {"avg_degree", spec.avg_degree},
            {"mu", spec.mu},     {"p_in", planted.p_in}, {"p_out", planted.p_out},
            {"edges", planted.graph.edge_count()},
            {"realized_avg_degree", 2.0 * static_cast<double>(planted.graph.edge_count()) / static_cast<double>(spec.n)}};
        write_json(config.out_dir / "synth_report.json", report);
        write_config(config.out_dir, "synth", config);
        fmt::print(log, "synth: {} nodes, {} edges -> {}\n", spec.n, planted.graph.edge_count(),
                   config.out_dir.string());
        return static_cast<int>(kSuccess);
    });
}

// ---------------------------------------------------------------------------
// replay

int replay(const fs::path& config_file, const std::optional<fs::path>& out_dir, std::ostream& log) {
    return guarded(log, [&] {
        auto in = open_input(config_file);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw InputError(fmt::format("{}: {}", config_file.string(), e.what()));
        }
        if (out_dir) {
            j["out_dir"] = out_dir->string();
        }
        const auto command = j.value("command", std::string{});
        try {
            if (command == "ingest") {
                return cmd_ingest(j.get<IngestConfig>(), log);
            }
            if (command == "detect") {
                return cmd_detect(j.get<DetectConfig>(), log);
            }
            if (command == "bench") {
                return cmd_bench(j.get<BenchConfig>(), log);
            }
            if (command == "stats") {
                return cmd_stats(j.get<StatsConfig>(), log);
            }
            if (command == "synth") {
                return cmd_synth(j.get<SynthConfig>(), log);
            }
        } catch (const nlohmann::json::exception& e) {
            throw InputError(fmt::format("{}: {}", config_file.string(), e.what()));
        }
        throw InputError(fmt::format("{}: unknown command `{}`", config_file.string(), command));
    });
}

} // namespace csrnbrw::app
