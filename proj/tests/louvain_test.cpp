#include "csrnbrw/error.hpp"
#include "csrnbrw/louvain.hpp"
#include "csrnbrw/rnbrw.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

using namespace csrnbrw;
using namespace testing_support;

namespace {

Graph bridged_triangles() {
    const std::vector<WeightedEdge> edges{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
    return Graph::from_edges(edges);
}

std::vector<CommunityId> random_labels(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<CommunityId> labels(n);
    for (auto& l : labels) {
        l = static_cast<CommunityId>(rng.below(k));
    }
    return labels;
}

} // namespace

TEST(Modularity, TwoDisjointTriangles) {
    const std::vector<WeightedEdge> edges{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    const auto g = Graph::from_edges(edges);
    EXPECT_NEAR(modularity(g, Partition({0, 0, 0, 1, 1, 1})), 0.5, 1e-12);
}

TEST(Modularity, SingleBlockIsZero) {
    Rng rng(1);
    const auto g = random_graph(12, 0.4, rng, true);
    EXPECT_NEAR(modularity(g, Partition::single_block(g.node_count())), 0.0, 1e-12);
}

TEST(Modularity, CompleteGraphNeverPositive) {
    Rng rng(2);
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto g = complete_graph(n);
        for (int trial = 0; trial < 30; ++trial) {
            EXPECT_LE(modularity(g, Partition(random_labels(n, 3, rng))), 1e-12);
        }
    }
}

TEST(Modularity, MatchesDenseFormula) {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = 2 + rng.below(15);
        const auto g = random_graph(n, 0.4, rng, true);
        if (g.edge_count() == 0) {
            continue;
        }
        const auto labels = random_labels(n, 1 + rng.below(4), rng);
        EXPECT_NEAR(modularity(g, Partition(labels)), dense_modularity(g, labels), 1e-12);
    }
}

TEST(Modularity, LevelGraphAgreesAndAggregationPreservesQ) {
    Rng rng(4);
    for (int trial = 0; trial < 60; ++trial) {
        const auto n = 2 + rng.below(49);
        const auto g = random_graph(n, 0.15, rng, true);
        if (g.edge_count() == 0) {
            continue;
        }
        const auto level = LevelGraph::from_graph(g);
        const Partition p(random_labels(n, 1 + rng.below(8), rng));
        std::vector<std::uint32_t> labels(p.labels().begin(), p.labels().end());
        EXPECT_NEAR(level.modularity(labels), modularity(g, p), 1e-12);

        const auto coarse = level.aggregate(labels, p.community_count());
        EXPECT_EQ(coarse.node_count(), p.community_count());
        EXPECT_NEAR(coarse.total_strength(), level.total_strength(), 1e-9);
        std::vector<std::uint32_t> identity(p.community_count());
        std::iota(identity.begin(), identity.end(), 0U);
        EXPECT_NEAR(coarse.modularity(identity), level.modularity(labels), 1e-12);
    }
}

TEST(Louvain, BridgedTrianglesSplit) {
    const auto g = bridged_triangles();
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = louvain(g, {seed});
        EXPECT_EQ(r.partition, Partition({0, 0, 0, 1, 1, 1}));
        EXPECT_NEAR(r.modularity, brute_force_max_modularity(g), 1e-12);
    }
}

TEST(Louvain, MatchesBruteForceOnTinyGraphs) {
    Rng rng(5);
    int optimal = 0;
    int total = 0;
    while (total < 40) {
        const auto n = 3 + rng.below(5);
        const auto g = random_graph(n, 0.5, rng, rng.below(2) == 1);
        if (!is_connected(g)) {
            continue;
        }
        ++total;
        const auto r = louvain(g, {static_cast<std::uint64_t>(total)});
        const double best = brute_force_max_modularity(g);
        EXPECT_LE(r.modularity, best + 1e-12);
        EXPECT_NEAR(r.modularity, modularity(g, r.partition), 1e-12);
        optimal += std::abs(r.modularity - best) < 1e-9 ? 1 : 0;
    }
    EXPECT_GE(optimal, 36);
}

TEST(Louvain, ModularityNeverDecreasesAcrossLevels) {
    Rng rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = random_graph(200, 0.03, rng, true);
        if (g.edge_count() == 0) {
            continue;
        }
        const auto r = louvain(g, {static_cast<std::uint64_t>(trial)});
        ASSERT_FALSE(r.levels.empty());
        for (std::size_t i = 1; i < r.levels.size(); ++i) {
            EXPECT_GE(r.levels[i].modularity, r.levels[i - 1].modularity - 1e-12);
            EXPECT_LE(r.levels[i].communities, r.levels[i - 1].communities);
        }
        EXPECT_NEAR(r.modularity, modularity(g, r.partition), 1e-9);
    }
}

TEST(Louvain, DeterministicPerSeed) {
    Rng rng(7);
    const auto g = random_graph(300, 0.02, rng, true);
    EXPECT_EQ(louvain(g, {9}).partition, louvain(g, {9}).partition);
}

TEST(Louvain, ZeroWeightThrows) {
    const auto g = complete_graph(3).with_weights(std::vector<double>{0.0, 0.0, 0.0});
    EXPECT_THROW((void)louvain(g), UndefinedMetricError);
}

TEST(Louvain, ZeroStrengthNodesStaySingletons) {
    // Triangle 0-1-2 with zero-weight spokes to 3 and 4.
    const std::vector<WeightedEdge> edges{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}, {0, 3, 0.0}, {1, 4, 0.0}};
    const auto r = louvain(Graph::from_edges(edges));
    EXPECT_EQ(r.partition, Partition({0, 0, 0, 1, 2}));
}

TEST(Louvain, StarAndCliqueWithStrengthWeights) {
    const auto net = project_collaboration(star_and_team_commits());
    const auto expected = partition_of(net.logins, {star_members(), blue_team()});
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        EXPECT_EQ(louvain(net.graph, {seed}).partition, expected);
    }
}

TEST(Louvain, StarDissolvesUnderRetraceWeights) {
    const auto net = project_collaboration(star_and_team_commits());
    WalkOptions options;
    options.seed = 3;
    const auto rw = reweight(net.graph, options);
    const auto r = louvain(rw.graph, {3});
    EXPECT_EQ(r.partition, partition_of(net.logins, {blue_team()}));
    EXPECT_EQ(r.partition.community_count(), 10U);
}

TEST(LouvainBestOf, NeverWorseThanFirstRun) {
    Rng rng(8);
    const auto g = random_graph(150, 0.05, rng);
    const auto single = louvain_best_of(g, {1}, 1);
    const auto best = louvain_best_of(g, {1}, 5);
    EXPECT_GE(best.modularity, single.modularity - 1e-12);
}

TEST(Nmi, Examples) {
    const Partition a({0, 0, 1, 1, 2});
    EXPECT_DOUBLE_EQ(nmi(a, a), 1.0);
    EXPECT_NEAR(nmi(Partition::singletons(6), Partition::single_block(6)), 0.0, 1e-12);
    EXPECT_NEAR(nmi(a, Partition({5, 5, 3, 3, 9})), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(nmi(Partition::single_block(4), Partition::single_block(4)), 1.0);
    EXPECT_THROW((void)nmi(a, Partition::singletons(4)), ValidationError);
}

TEST(Nmi, SymmetricAndBounded) {
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = 2 + rng.below(40);
        const Partition a(random_labels(n, 1 + rng.below(6), rng));
        const Partition b(random_labels(n, 1 + rng.below(6), rng));
        const double ab = nmi(a, b);
        EXPECT_NEAR(ab, nmi(b, a), 1e-12);
        EXPECT_GE(ab, -1e-12);
        EXPECT_LE(ab, 1.0 + 1e-12);
    }
}

TEST(PartitionIo, RoundTripWithHeader) {
    const Partition p({3, 3, 1, 0, 1});
    std::stringstream buffer;
    write_partition(buffer, p, {7, 1e-7, 0.25, "louvain"});
    EXPECT_EQ(buffer.str().rfind("# method louvain\n", 0), 0U);
    EXPECT_EQ(read_partition(buffer), p);
}

TEST(PartitionIo, RejectsGaps) {
    std::istringstream in("0 0\n2 1\n");
    EXPECT_THROW((void)read_partition(in), ValidationError);
}
