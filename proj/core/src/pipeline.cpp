#include "csrnbrw/pipeline.hpp"

#include "csrnbrw/rng.hpp"

#include <algorithm>
#include <cmath>

namespace csrnbrw {

Detection detect_communities(const Graph& sc_graph, const DetectionOptions& options) {
    Detection d;
    LouvainOptions plain;
    plain.seed = derive_seed(options.seed, stage::plain_louvain);
    plain.min_gain = options.min_gain;
    d.plain = louvain_best_of(sc_graph, plain, options.runs);

    WalkOptions walks;
    walks.seed = derive_seed(options.seed, stage::walks);
    walks.workers = options.workers;
    walks.total_walks = std::max<std::uint64_t>(
        1, static_cast<std::uint64_t>(std::llround(options.walks_per_edge * static_cast<double>(sc_graph.edge_count()))));
    d.reweighting = reweight(sc_graph, walks);

    if (d.reweighting.graph.total_weight() > 0.0) {
        LouvainOptions weighted = plain;
        weighted.seed = derive_seed(options.seed, stage::weighted_louvain);
        auto result = louvain_best_of(d.reweighting.graph, weighted, options.runs);
        d.weighted = std::move(result.partition);
        d.weighted_modularity = result.modularity;
    } else {
        d.weighted = Partition::singletons(sc_graph.node_count());
    }
    return d;
}

} // namespace csrnbrw
