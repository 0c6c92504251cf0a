#include "csrnbrw/synth.hpp"

#include "csrnbrw/error.hpp"
#include "csrnbrw/rng.hpp"

#include <fmt/format.h>

#include <cmath>

namespace csrnbrw {

namespace {

// Visits each of `slots` Bernoulli(p) trials that succeed, skipping ahead by
// geometric gaps so the cost is proportional to the number of successes.
template <typename Emit>
void sample_pairs(std::uint64_t slots, double p, Rng& rng, Emit emit) {
    if (p <= 0.0 || slots == 0) {
        return;
    }
    if (p >= 1.0) {
        for (std::uint64_t i = 0; i < slots; ++i) {
            emit(i);
        }
        return;
    }
    const double log_q = std::log1p(-p);
    std::uint64_t pos = 0;
    while (true) {
        const double u = rng.uniform();
        const double gap = std::floor(std::log1p(-u) / log_q);
        if (gap >= static_cast<double>(slots - pos)) {
            return;
        }
        pos += static_cast<std::uint64_t>(gap);
        emit(pos);
        if (++pos >= slots) {
            return;
        }
    }
}

} // namespace

PlantedGraph planted_partition(const PlantedSpec& spec) {
    if (spec.k < 2 || spec.n < spec.k) {
        throw ValidationError(fmt::format("planted partition needs n >= k >= 2 (n={}, k={})",
                                          spec.n, spec.k));
    }
    if (!(spec.avg_degree > 0.0) || spec.avg_degree >= static_cast<double>(spec.n)) {
        throw ValidationError(fmt::format("average degree {} outside (0, n)", spec.avg_degree));
    }
    if (!(spec.mu >= 0.0 && spec.mu < 1.0)) {
        throw ValidationError(fmt::format("mixing fraction {} outside [0, 1)", spec.mu));
    }
    const auto n = static_cast<double>(spec.n);
    const double block = n / static_cast<double>(spec.k);
    if (block < 2.0) {
        throw ValidationError("blocks need at least 2 nodes on average");
    }

    PlantedGraph out;
    out.p_in = spec.avg_degree * (1.0 - spec.mu) / (block - 1.0);
    out.p_out = spec.avg_degree * spec.mu / (n - block);
    if (out.p_in > 1.0) {
        throw ValidationError(
            fmt::format("infeasible planted partition: intra-block probability {} exceeds 1", out.p_in));
    }

    std::vector<std::size_t> start(spec.k + 1);
    for (std::size_t b = 0; b <= spec.k; ++b) {
        start[b] = b * spec.n / spec.k;
    }
    std::vector<CommunityId> labels(spec.n);
    for (std::size_t b = 0; b < spec.k; ++b) {
        for (std::size_t v = start[b]; v < start[b + 1]; ++v) {
            labels[v] = static_cast<CommunityId>(b);
        }
    }

    Rng rng(spec.seed);
    std::vector<WeightedEdge> edges;
    edges.reserve(static_cast<std::size_t>(n * spec.avg_degree / 2.0 * 1.1));
    for (std::size_t a = 0; a < spec.k; ++a) {
        const std::uint64_t size_a = start[a + 1] - start[a];
        // Upper triangle of the block, row-major over pairs (i < j).
        // Upper triangle of the block enumerated row by row; draws arrive in
        // increasing order, so the row cursor only moves forward.
        std::uint64_t i = 0;
        std::uint64_t row_start = 0;
        sample_pairs(size_a * (size_a - 1) / 2, out.p_in, rng, [&](std::uint64_t idx) {
            while (idx >= row_start + (size_a - 1 - i)) {
                row_start += size_a - 1 - i;
                ++i;
            }
            const std::uint64_t j = i + 1 + (idx - row_start);
            edges.push_back({static_cast<NodeId>(start[a] + i), static_cast<NodeId>(start[a] + j), 1.0});
        });
        for (std::size_t b = a + 1; b < spec.k; ++b) {
            const std::uint64_t size_b = start[b + 1] - start[b];
            sample_pairs(size_a * size_b, out.p_out, rng, [&](std::uint64_t idx) {
                edges.push_back({static_cast<NodeId>(start[a] + idx / size_b),
                                 static_cast<NodeId>(start[b] + idx % size_b), 1.0});
            });
        }
    }
    out.graph = Graph::from_edges(edges, spec.n);
    out.truth = Partition(std::move(labels));
    return out;
}

} // namespace csrnbrw
