#pragma once

#include "csrnbrw/graph.hpp"
#include "csrnbrw/partition.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <span>
#include <vector>

namespace csrnbrw {

/// Modularity of p on g with weighted degrees and resolution 1.
/// Throws UndefinedMetricError when g has zero total weight and
/// ValidationError when p does not cover g.
double modularity(const Graph& g, const Partition& p);

/// Weighted graph with self-loops, the working representation of one Louvain
/// level. loop[v] holds A_vv, twice the edge weight folded into super-node v,
/// so that strength(v) = sum of incident weights + loop[v] and modularity is
/// preserved by aggregation.
class LevelGraph {
public:
    struct Arc {
        std::uint32_t target;
        double weight;
    };

    static LevelGraph from_graph(const Graph& g);

    std::size_t node_count() const noexcept { return loop_.size(); }
    std::span<const Arc> arcs(std::uint32_t v) const {
        return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
    }
    double loop(std::uint32_t v) const { return loop_[v]; }
    double strength(std::uint32_t v) const { return strength_[v]; }
    /// Sum of strengths, i.e. 2m.
    double total_strength() const noexcept { return total_strength_; }

    /// One super-node per community of labels (dense in [0, community_count)).
    LevelGraph aggregate(std::span<const std::uint32_t> labels, std::size_t community_count) const;

    double modularity(std::span<const std::uint32_t> labels) const;

private:
    void finish();

    std::vector<std::size_t> offsets_{0};
    std::vector<Arc> arcs_;
    std::vector<double> loop_;
    std::vector<double> strength_;
    double total_strength_ = 0.0;
};

struct LouvainOptions {
    std::uint64_t seed = 0;
    double min_gain = 1e-7;
    std::size_t max_levels = 64;
};

struct LouvainLevel {
    std::size_t communities = 0;
    double modularity = 0.0;
};

struct LouvainResult {
    Partition partition;
    double modularity = 0.0;
    std::vector<LouvainLevel> levels;
};

/// Two-phase Louvain optimization.
///
/// Local moving visits nodes in a fresh seeded shuffle each sweep and moves a
/// node to the neighboring community with the largest modularity gain (ties
/// to the lowest community id; a node stays unless some community strictly
/// beats its own). Sweeps repeat until one gains less than min_gain, then the
/// communities are aggregated into super-nodes and the process restarts.
/// Optimization stops when a level produces no gain of at least min_gain.
/// Nodes of zero strength never move.
LouvainResult louvain(const Graph& g, const LouvainOptions& options = {});

/// Best of `runs` independent runs with seeds derived from options.seed.
LouvainResult louvain_best_of(const Graph& g, const LouvainOptions& options, std::size_t runs);

/// 2 I(A;B) / (H(A) + H(B)); 1 when both partitions have zero entropy.
/// Throws ValidationError when node counts differ.
double nmi(const Partition& a, const Partition& b);

/// `node_id community_id` lines preceded by `#` header lines.
struct PartitionHeader {
    std::uint64_t seed = 0;
    double min_gain = 0.0;
    double modularity = 0.0;
    std::string method;
};
void write_partition(std::ostream& out, const Partition& p, const PartitionHeader& header);
Partition read_partition(std::istream& in);

} // namespace csrnbrw
