#pragma once

#include "csrnbrw/graph.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace csrnbrw {

/// Per-edge tallies of cycle-closing events.
struct RetraceCounts {
    std::vector<std::uint64_t> tallies;  // indexed by EdgeId
    std::uint64_t total_walks = 0;
    std::uint64_t completed_cycles = 0;

    /// Adds another run's tallies over the same edge set.
    RetraceCounts& operator+=(const RetraceCounts& other);
};

struct WalkOptions {
    std::uint64_t total_walks = 0;  // 0: 10 * edge_count
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 0;    // 0: node_count
    unsigned workers = 1;
};

/// Renewal nonbacktracking random walks.
///
/// Each walk starts on a uniformly random directed edge u->v with u and v
/// marked visited, then repeatedly steps to a uniformly random neighbor other
/// than the node it just came from. Reaching an already visited node completes
/// a cycle: the edge used for that step is credited and the walk ends. Dead
/// ends and walks exceeding max_steps end without credit. Edge weights play no
/// part in stepping.
///
/// Work is split into `workers` contiguous shares, each with its own RNG
/// stream (seed, worker index) and private tallies summed at the end, so the
/// result depends on (graph, total_walks, seed, workers) only.
RetraceCounts run_walks(const Graph& g, const WalkOptions& options);

enum class WeightKind { pi, csrnbrw };

struct EdgeWeights {
    std::vector<double> values;  // indexed by EdgeId
    WeightKind kind = WeightKind::pi;
};

/// pi_e = tally_e / completed_cycles; all zero when no cycle completed.
EdgeWeights retrace_probabilities(const RetraceCounts& counts);

/// pi_e times the collaboration strength stored as g's edge weight. Throws
/// ValidationError when pi is not pi-tagged or indexes a different edge set.
EdgeWeights csrnbrw_weights(const EdgeWeights& pi, const Graph& sc_graph);

/// Runs the walks and returns sc_graph reweighted by pi_e * SC_e, along with
/// the intermediate values for auditing.
struct Reweighting {
    RetraceCounts counts;
    EdgeWeights pi;
    EdgeWeights csrnbrw;
    Graph graph;
};
Reweighting reweight(const Graph& sc_graph, const WalkOptions& options);

/// `u v pi sc csrnbrw` per edge, preceded by a `#` column header.
void write_weight_dump(std::ostream& out, const Graph& sc_graph, const EdgeWeights& pi,
                       const EdgeWeights& csrnbrw);

} // namespace csrnbrw
