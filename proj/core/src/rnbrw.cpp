#include "csrnbrw/rnbrw.hpp"

#include "csrnbrw/error.hpp"
#include "csrnbrw/rng.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <ostream>
#include <thread>

namespace csrnbrw {

RetraceCounts& RetraceCounts::operator+=(const RetraceCounts& other) {
    if (tallies.empty()) {
        tallies.assign(other.tallies.size(), 0);
    }
    if (tallies.size() != other.tallies.size()) {
        throw ValidationError("cannot merge retrace counts over different edge sets");
    }
    for (std::size_t i = 0; i < tallies.size(); ++i) {
        tallies[i] += other.tallies[i];
    }
    total_walks += other.total_walks;
    completed_cycles += other.completed_cycles;
    return *this;
}

namespace {

RetraceCounts walk_share(const Graph& g, std::uint64_t walks, std::uint64_t max_steps, Rng rng) {
    RetraceCounts counts;
    counts.tallies.assign(g.edge_count(), 0);
    counts.total_walks = walks;

    // visited[v] == stamp marks v as seen on the current walk.
    std::vector<std::uint64_t> visited(g.node_count(), 0);
    std::uint64_t stamp = 0;
    const std::uint64_t directed = 2 * static_cast<std::uint64_t>(g.edge_count());

    for (std::uint64_t w = 0; w < walks; ++w) {
        ++stamp;
        const std::uint64_t pick = rng.below(directed);
        const Edge& first = g.edge(static_cast<EdgeId>(pick >> 1));
        NodeId prev = (pick & 1) ? first.v : first.u;
        NodeId cur = (pick & 1) ? first.u : first.v;
        visited[prev] = stamp;
        visited[cur] = stamp;

        for (std::uint64_t step = 0; step < max_steps; ++step) {
            const auto adj = g.neighbors(cur);
            if (adj.size() < 2) {
                break;  // only the way back is left
            }
            // Draw among the deg - 1 entries other than prev: if the draw hits
            // prev, substitute the excluded last slot.
            auto slot = static_cast<std::size_t>(rng.below(adj.size() - 1));
            if (adj[slot].neighbor == prev) {
                slot = adj.size() - 1;
            }
            const Adjacent next = adj[slot];
            if (visited[next.neighbor] == stamp) {
                ++counts.tallies[next.edge];
                ++counts.completed_cycles;
                break;
            }
            visited[next.neighbor] = stamp;
            prev = cur;
            cur = next.neighbor;
        }
    }
    return counts;
}

} // namespace

RetraceCounts run_walks(const Graph& g, const WalkOptions& options) {
    RetraceCounts total;
    total.tallies.assign(g.edge_count(), 0);
    if (g.edge_count() == 0) {
        return total;
    }
    const std::uint64_t walks =
        options.total_walks ? options.total_walks : 10 * static_cast<std::uint64_t>(g.edge_count());
    const std::uint64_t max_steps = options.max_steps ? options.max_steps : g.node_count();
    const unsigned workers = std::max(1U, options.workers);

    std::vector<RetraceCounts> shares(workers);
    auto run_share = [&](unsigned w) {
        const std::uint64_t count = walks / workers + (w < walks % workers ? 1 : 0);
        shares[w] = walk_share(g, count, max_steps, Rng(options.seed, w));
    };
    if (workers == 1) {
        run_share(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run_share, w);
        }
    }
    total.tallies.clear();
    for (const auto& share : shares) {
        total += share;
    }
    return total;
}

EdgeWeights retrace_probabilities(const RetraceCounts& counts) {
    EdgeWeights pi;
    pi.kind = WeightKind::pi;
    pi.values.assign(counts.tallies.size(), 0.0);
    if (counts.completed_cycles == 0) {
        return pi;
    }
    const auto cycles = static_cast<double>(counts.completed_cycles);
    for (std::size_t e = 0; e < counts.tallies.size(); ++e) {
        pi.values[e] = static_cast<double>(counts.tallies[e]) / cycles;
    }
    return pi;
}

EdgeWeights csrnbrw_weights(const EdgeWeights& pi, const Graph& sc_graph) {
    if (pi.kind != WeightKind::pi) {
        throw ValidationError("csrnbrw weights need retracing probabilities as input");
    }
    if (pi.values.size() != sc_graph.edge_count()) {
        throw ValidationError(fmt::format("{} retracing probabilities for {} edges",
                                          pi.values.size(), sc_graph.edge_count()));
    }
    EdgeWeights out;
    out.kind = WeightKind::csrnbrw;
    out.values.resize(pi.values.size());
    for (EdgeId e = 0; e < pi.values.size(); ++e) {
        out.values[e] = pi.values[e] * sc_graph.edge(e).weight;
    }
    return out;
}

Reweighting reweight(const Graph& sc_graph, const WalkOptions& options) {
    Reweighting r;
    r.counts = run_walks(sc_graph, options);
    r.pi = retrace_probabilities(r.counts);
    r.csrnbrw = csrnbrw_weights(r.pi, sc_graph);
    r.graph = sc_graph.with_weights(r.csrnbrw.values);
    return r;
}

void write_weight_dump(std::ostream& out, const Graph& sc_graph, const EdgeWeights& pi,
                       const EdgeWeights& csrnbrw) {
    if (pi.values.size() != sc_graph.edge_count() ||
        csrnbrw.values.size() != sc_graph.edge_count()) {
        throw ValidationError("weight vectors do not match the graph's edge set");
    }
    fmt::print(out, "# u v pi sc csrnbrw\n");
    for (EdgeId e = 0; e < sc_graph.edge_count(); ++e) {
        const auto& edge = sc_graph.edge(e);
        fmt::print(out, "{} {} {} {} {}\n", edge.u, edge.v, pi.values[e], edge.weight,
                   csrnbrw.values[e]);
    }
}

} // namespace csrnbrw
