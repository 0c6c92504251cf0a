#pragma once

#include "csrnbrw/graph.hpp"
#include "csrnbrw/louvain.hpp"
#include "csrnbrw/rnbrw.hpp"

#include <cstdint>
#include <optional>

namespace csrnbrw {

struct DetectionOptions {
    std::uint64_t seed = 1;
    double walks_per_edge = 10.0;
    double min_gain = 1e-7;
    std::size_t runs = 1;
    unsigned workers = 1;
};

/// Plain Louvain on the collaboration-strength graph next to Louvain on the
/// CSRNBRW-reweighted graph. Stage seeds derive from options.seed.
struct Detection {
    LouvainResult plain;
    Reweighting reweighting;
    Partition weighted;
    // Unset when no walk closed a cycle, leaving every CSRNBRW weight at zero;
    // `weighted` is then all singletons.
    std::optional<double> weighted_modularity;
};

/// Requires at least one edge of positive weight.
Detection detect_communities(const Graph& sc_graph, const DetectionOptions& options);

namespace stage {
inline constexpr std::uint64_t walks = 1;
inline constexpr std::uint64_t plain_louvain = 2;
inline constexpr std::uint64_t weighted_louvain = 3;
inline constexpr std::uint64_t generator = 4;
} // namespace stage

} // namespace csrnbrw
