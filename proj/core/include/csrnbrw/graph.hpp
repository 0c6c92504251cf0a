#pragma once

#include "csrnbrw/partition.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace csrnbrw {

using EdgeId = std::uint32_t;

struct WeightedEdge {
    NodeId u = 0;
    NodeId v = 0;
    double weight = 1.0;

    friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// Edge stored with u < v.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct Adjacent {
    NodeId neighbor = 0;
    EdgeId edge = 0;
};

/// Undirected weighted simple graph in compressed adjacency form.
///
/// Immutable after construction. Edges are kept sorted by (u, v) with u < v,
/// so an edge index identifies the same unordered pair across every graph that
/// shares a structure (see with_weights). Each node's adjacency is sorted by
/// neighbor id.
class Graph {
public:
    Graph() = default;

    /// Merges duplicate pairs by summing weights. Throws ValidationError on a
    /// self-loop, a negative or non-finite weight, or an endpoint outside
    /// node_count when node_count is given. Without node_count the graph has
    /// max endpoint + 1 nodes.
    static Graph from_edges(std::span<const WeightedEdge> edges,
                            std::optional<std::size_t> node_count = std::nullopt);

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }

    std::span<const Adjacent> neighbors(NodeId v) const {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    double weighted_degree(NodeId v) const;
    double total_weight() const noexcept;

    /// Index of edge {u, v}, if present.
    std::optional<EdgeId> find_edge(NodeId u, NodeId v) const;

    /// Same structure, new per-edge weights (indexed by EdgeId).
    Graph with_weights(std::span<const double> weights) const;

    std::vector<double> weights() const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
    }

private:
    std::size_t node_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<Adjacent> adjacency_;
};

/// Graph restricted to a node subset together with the map back to the
/// original ids: original[new_id] = old_id.
struct Subgraph {
    Graph graph;
    std::vector<NodeId> original;
};

/// 2|E| / (n(n-1)). Throws UndefinedMetricError when n < 2.
double density(const Graph& g);

/// 3 * triangles / connected triplets; 0 when the graph has no triplets.
double transitivity(const Graph& g);

std::size_t triangle_count(const Graph& g);

Partition connected_components(const Graph& g);

/// Induced subgraph on the nodes with keep[v] set; ids renumbered in order.
Subgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep);

Subgraph remove_isolates(const Graph& g);

/// Whitespace-separated `u v w` lines; `#` comment lines and blank lines are
/// skipped. Throws ValidationError with the line number on malformed input.
Graph read_edge_list(std::istream& in, std::optional<std::size_t> node_count = std::nullopt);

/// Writes a `# nodes <n>` header followed by one `u v w` line per edge.
void write_edge_list(std::ostream& out, const Graph& g);

} // namespace csrnbrw
