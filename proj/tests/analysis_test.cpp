#include "csrnbrw/analysis.hpp"
#include "csrnbrw/error.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace csrnbrw;
using namespace testing_support;

TEST(CommunitySizes, Examples) {
    EXPECT_EQ(community_sizes(Partition({0, 0, 0, 1, 1, 1, 2, 2, 2, 2})), (SizeHistogram{{3, 2}, {4, 1}}));
    EXPECT_EQ(community_sizes(Partition::singletons(5)), (SizeHistogram{{1, 5}}));

    const auto net = project_collaboration(star_and_team_commits());
    const auto p = partition_of(net.logins, {blue_team()});
    EXPECT_EQ(community_sizes(p), (SizeHistogram{{1, 9}, {5, 1}}));
}

TEST(CommunityNetwork, BridgedTriangles) {
    const std::vector<WeightedEdge> edges{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}};
    const auto g = Graph::from_edges(edges);
    const auto net = community_network(g, Partition({0, 0, 0, 1, 1, 1}));
    EXPECT_EQ(net.node_count(), 2U);
    ASSERT_EQ(net.edge_count(), 1U);
    EXPECT_DOUBLE_EQ(net.edge(0).weight, 1.0);
    EXPECT_EQ(community_network(g, Partition::single_block(6)).edge_count(), 0U);
}

TEST(CommunityNetwork, EightNodesThreeCommunities) {
    // Communities A={0,1,2}, B={3,4,5}, C={6,7}.
    const std::vector<WeightedEdge> edges{{0, 1, 1}, {1, 2, 1}, {0, 3, 2}, {2, 4, 1.5}, {1, 6, 1},
                                          {5, 7, 4},  {4, 6, 0.5}, {6, 7, 3}, {3, 5, 1}};
    const auto g = Graph::from_edges(edges);
    const auto net = community_network(g, Partition({0, 0, 0, 1, 1, 1, 2, 2}));
    ASSERT_EQ(net.edge_count(), 3U);
    const auto weight = [&](NodeId a, NodeId b) { return net.edge(*net.find_edge(a, b)).weight; };
    EXPECT_DOUBLE_EQ(weight(0, 1), 3.5);  // 0-3 + 2-4
    EXPECT_DOUBLE_EQ(weight(0, 2), 1.0);  // 1-6
    EXPECT_DOUBLE_EQ(weight(1, 2), 4.5);  // 5-7 + 4-6
}

TEST(HurwitzZeta, MatchesDirectSums) {
    // zeta(2) = pi^2 / 6, zeta(2, 2) = zeta(2) - 1.
    const double pi2_6 = M_PI * M_PI / 6.0;
    EXPECT_NEAR(hurwitz_zeta(2.0, 1.0), pi2_6, 1e-12);
    EXPECT_NEAR(hurwitz_zeta(2.0, 2.0), pi2_6 - 1.0, 1e-12);
    double direct = 0.0;
    for (int k = 0; k < 2'000'000; ++k) {
        direct += std::pow(3.0 + k, -2.5);
    }
    direct += std::pow(3.0 + 2'000'000 - 0.5, -1.5) / 1.5;
    EXPECT_NEAR(hurwitz_zeta(2.5, 3.0), direct, 1e-10);
}

TEST(FitPowerLaw, RecoversExponent) {
    for (const auto& [alpha, seed] : {std::pair{2.5, 1}, std::pair{2.8, 2}}) {
        const PowerLawSampler sampler(alpha);
        Rng rng(static_cast<std::uint64_t>(seed));
        std::vector<std::uint64_t> xs(100'000);
        for (auto& x : xs) {
            x = sampler(rng);
        }
        const auto fit = fit_power_law(xs);
        EXPECT_NEAR(fit.alpha, alpha, 0.1) << "alpha " << alpha;
        EXPECT_GE(fit.tail_size, 50U);
    }
}

TEST(FitPowerLaw, Refusals) {
    std::vector<std::uint64_t> few(49, 3);
    few[0] = 1;
    EXPECT_THROW((void)fit_power_law(few), InsufficientDataError);
    EXPECT_THROW((void)fit_power_law(std::vector<std::uint64_t>(100, 4)), InsufficientDataError);
    std::vector<std::uint64_t> with_zero(100, 2);
    with_zero[5] = 0;
    EXPECT_THROW((void)fit_power_law(with_zero), ValidationError);
}

TEST(ResolutionAudit, NodeThresholdCounts) {
    // K8 over nodes 0..7 (28 edges) plus four pendants: |E| = 32, threshold 4.
    std::vector<WeightedEdge> edges;
    for (NodeId u = 0; u < 8; ++u) {
        for (NodeId v = u + 1; v < 8; ++v) {
            edges.push_back({u, v, 1.0});
        }
    }
    for (NodeId leaf = 8; leaf < 12; ++leaf) {
        edges.push_back({leaf - 8, leaf, 1.0});
    }
    const auto g = Graph::from_edges(edges);
    ASSERT_EQ(g.edge_count(), 32U);
    const Partition p({0, 0, 0, 1, 1, 1, 1, 1, 2, 3, 4, 5});
    const auto audit = resolution_audit(g, p);
    EXPECT_DOUBLE_EQ(audit.node_threshold, 4.0);
    EXPECT_DOUBLE_EQ(audit.edge_threshold, 8.0);
    EXPECT_EQ(audit.above_node_threshold, 1U);
    // Internal edges: 3 and 10; only the larger exceeds 8.
    EXPECT_EQ(audit.above_edge_threshold, 1U);
    EXPECT_EQ(resolution_audit(g, Partition::singletons(12)).above_node_threshold, 0U);
}

TEST(SizeSetSimilarity, Examples) {
    const SizeHistogram a{{3, 2}, {4, 1}};
    EXPECT_DOUBLE_EQ(size_set_similarity(a, a), 1.0);
    EXPECT_DOUBLE_EQ(size_set_similarity(a, SizeHistogram{{5, 1}}), 0.0);
    EXPECT_DOUBLE_EQ(size_set_similarity(a, SizeHistogram{{3, 1}, {4, 2}}), 0.5);
}

TEST(DunbarCoverage, Examples) {
    std::vector<CommunityId> tens;
    for (NodeId v = 0; v < 50; ++v) {
        tens.push_back(v / 10);
    }
    EXPECT_DOUBLE_EQ(dunbar_coverage(Partition(tens)), 1.0);
    EXPECT_DOUBLE_EQ(dunbar_coverage(Partition::singletons(7)), 0.0);

    std::vector<CommunityId> mixed;
    for (CommunityId c = 0; c < 5; ++c) {
        mixed.insert(mixed.end(), 2, c);
    }
    for (CommunityId c = 5; c < 14; ++c) {
        mixed.insert(mixed.end(), 10, c);
    }
    ASSERT_EQ(mixed.size(), 100U);
    EXPECT_DOUBLE_EQ(dunbar_coverage(Partition(mixed)), 0.9);
}

TEST(DegreeHistogram, CountsDegrees) {
    const std::vector<WeightedEdge> edges{{0, 1}, {0, 2}, {0, 3}};
    EXPECT_EQ(degree_histogram(Graph::from_edges(edges)), (std::map<std::size_t, std::size_t>{{1, 3}, {3, 1}}));
}

TEST(HistogramCsv, TwoColumns) {
    std::ostringstream out;
    write_histogram_csv(out, {{1, 4}, {7, 2}}, "size", "count");
    EXPECT_EQ(out.str(), "size,count\n1,4\n7,2\n");
}
