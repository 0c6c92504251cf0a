#pragma once

#include "csrnbrw/graph.hpp"
#include "csrnbrw/partition.hpp"

#include <cstdint>

namespace csrnbrw {

/// Balanced planted-partition model. Each node expects avg_degree neighbors,
/// a fraction mu of them outside its own block.
struct PlantedSpec {
    std::size_t n = 0;
    std::size_t k = 0;
    double avg_degree = 0.0;
    double mu = 0.0;
    std::uint64_t seed = 0;
};

struct PlantedGraph {
    Graph graph;  // unit weights
    Partition truth;
    double p_in = 0.0;
    double p_out = 0.0;
};

/// Blocks are contiguous id ranges of size floor(n/k) or ceil(n/k). Pairs
/// inside a block connect with p_in = avg_degree (1 - mu) / (s - 1) and pairs
/// across blocks with p_out = avg_degree mu / (n - s), s = n / k. Throws
/// ValidationError on an invalid spec or when p_in exceeds 1.
PlantedGraph planted_partition(const PlantedSpec& spec);

} // namespace csrnbrw
