#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace csrnbrw::app {

namespace fs = std::filesystem;

// Process exit codes shared by every subcommand.
enum ExitCode : int {
    kSuccess = 0,
    kInputError = 2,
    kDegenerateGraph = 3,
    kMissingAttributes = 4,
};

struct IngestConfig {
    fs::path commits;
    std::optional<fs::path> countries;
    std::optional<fs::path> repo_languages;
    bool filter_bots = false;
    std::string bot_suffix = "bot";
    bool international = false;
    std::size_t max_repo_contributors = 10'000;
    fs::path out_dir = "out";
};

struct DetectConfig {
    fs::path graph;
    std::uint64_t seed = 1;
    double walks_per_edge = 10.0;
    double min_gain = 1e-7;
    std::size_t runs = 1;
    unsigned workers = 1;
    fs::path out_dir = "out";
};

struct BenchConfig {
    std::vector<std::size_t> sizes = {10'000};
    std::vector<double> degree_factors = {1.0, 2.0, 3.0};  // multiples of ln n
    std::vector<double> mixing = {0.42};
    std::size_t community_size = 100;  // k = n / community_size
    std::size_t seeds = 5;
    std::uint64_t seed = 1;
    double walks_per_edge = 100.0;
    double min_gain = 1e-7;
    unsigned workers = 1;
    fs::path out_dir = "out";
};

struct StatsConfig {
    fs::path nodes;
    fs::path partition;
    std::vector<fs::path> languages;  // one `login,language,rule_id` CSV per rule
    std::optional<fs::path> countries;
    std::optional<std::size_t> comparisons;  // Bonferroni m; default = number of pairs
    std::size_t top_languages = 10;
    fs::path out_dir = "out";
};

struct SynthConfig {
    std::size_t n = 1000;
    std::optional<std::size_t> k;   // default n / 100
    std::optional<double> avg_degree;
    double degree_factor = 1.0;     // used when avg_degree is unset: factor * ln n
    double mu = 0.1;
    std::uint64_t seed = 1;
    fs::path out_dir = "out";
};

void to_json(nlohmann::json& j, const IngestConfig& c);
void from_json(const nlohmann::json& j, IngestConfig& c);
void to_json(nlohmann::json& j, const DetectConfig& c);
void from_json(const nlohmann::json& j, DetectConfig& c);
void to_json(nlohmann::json& j, const BenchConfig& c);
void from_json(const nlohmann::json& j, BenchConfig& c);
void to_json(nlohmann::json& j, const StatsConfig& c);
void from_json(const nlohmann::json& j, StatsConfig& c);
void to_json(nlohmann::json& j, const SynthConfig& c);
void from_json(const nlohmann::json& j, SynthConfig& c);

// Each command writes its outputs plus config.json into out_dir and returns
// an ExitCode. Diagnostics go to `log`.
int cmd_ingest(const IngestConfig& config, std::ostream& log);
int cmd_detect(const DetectConfig& config, std::ostream& log);
int cmd_bench(const BenchConfig& config, std::ostream& log);
int cmd_stats(const StatsConfig& config, std::ostream& log);
int cmd_synth(const SynthConfig& config, std::ostream& log);

/// Re-runs the command recorded in a config.json, optionally redirecting its
/// output directory.
int replay(const fs::path& config_file, const std::optional<fs::path>& out_dir, std::ostream& log);

} // namespace csrnbrw::app
