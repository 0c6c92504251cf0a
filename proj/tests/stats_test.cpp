#include "csrnbrw/error.hpp"
#include "csrnbrw/stats.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace csrnbrw;
using namespace testing_support;

TEST(Wilcoxon, AllZeroDifferencesRefused) {
    const std::vector<double> x{1, 2, 3, 4, 5, 6, 7};
    EXPECT_THROW((void)wilcoxon_signed_rank(x, x), InsufficientDataError);
    const std::vector<double> shorter{1, 2};
    EXPECT_THROW((void)wilcoxon_signed_rank(x, shorter), ValidationError);
}

TEST(Wilcoxon, TenPairsMatchSignEnumeration) {
    const std::vector<double> x{125, 115, 130, 140, 140, 115, 140, 125, 141, 135};
    const std::vector<double> y{110, 122, 125, 120, 140.5, 124, 123, 137, 135, 145};
    const auto r = wilcoxon_signed_rank(x, y);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.n, 10U);
    EXPECT_NEAR(r.p, exhaustive_signed_rank_p(x, y), 1e-12);
    EXPECT_DOUBLE_EQ(r.w_plus + r.w_minus, 55.0);
}

TEST(Wilcoxon, RandomTieFreeMatchesEnumeration) {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = 6 + rng.below(7);
        std::vector<double> x(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.uniform();
            y[i] = rng.uniform() + 0.3 * rng.uniform();
        }
        EXPECT_NEAR(wilcoxon_signed_rank(x, y).p, exhaustive_signed_rank_p(x, y), 1e-9);
    }
}

TEST(Wilcoxon, NormalApproximationIsClose) {
    Rng rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 20;
        std::vector<double> x(n);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.uniform();
            y[i] = rng.uniform();
        }
        const auto exact = wilcoxon_signed_rank(x, y, {WilcoxonMethod::exact});
        const auto normal = wilcoxon_signed_rank(x, y, {WilcoxonMethod::normal});
        EXPECT_FALSE(normal.exact);
        EXPECT_NEAR(exact.p, normal.p, 0.02);
    }
}

TEST(Wilcoxon, StrongShift) {
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 15; ++i) {
        x.push_back(10.0 + i * 0.37);
        y.push_back(i * 0.21);
    }
    EXPECT_LT(wilcoxon_signed_rank(x, y).p, 0.001);
}

TEST(Wilcoxon, TiedDifferencesUseMidranks) {
    // Ten identical positive shifts: every sign flip pattern keeps ties.
    const std::vector<double> x(10, 2.0);
    const std::vector<double> y(10, 1.0);
    const auto r = wilcoxon_signed_rank(x, y);
    EXPECT_DOUBLE_EQ(r.w_plus, 55.0);
    EXPECT_NEAR(r.p, 2.0 / 1024.0, 1e-12);
}

TEST(ChiSquare, ProportionalTable) {
    ContingencyTable t;
    t.counts = {{10, 20}, {20, 40}};
    const auto r = chi_square_homogeneity(t);
    EXPECT_NEAR(r.statistic, 0.0, 1e-12);
    EXPECT_NEAR(r.p, 1.0, 1e-12);
}

TEST(ChiSquare, DiagonalTwoByTwo) {
    ContingencyTable t;
    t.counts = {{10, 0}, {0, 10}};
    const auto r = chi_square_homogeneity(t);
    EXPECT_NEAR(r.statistic, 20.0, 1e-9);
    EXPECT_EQ(r.dof, 1U);
    EXPECT_LT(r.p, 1e-4);
}

TEST(ChiSquare, ThreeByThree) {
    // Margins all 60, N = 180, every expected count 20.
    ContingencyTable t;
    t.counts = {{10, 20, 30}, {20, 20, 20}, {30, 20, 10}};
    const auto r = chi_square_homogeneity(t);
    EXPECT_NEAR(r.statistic, 20.0, 1e-9);
    EXPECT_EQ(r.dof, 4U);
    // Survival of chi-square(4) at 20: e^-10 (1 + 10).
    EXPECT_NEAR(r.p, std::exp(-10.0) * 11.0, 1e-12);
}

TEST(ChiSquare, PrunesEmptyMarginsThenNeedsTwoRows) {
    ContingencyTable t;
    t.counts = {{5, 7}, {0, 0}};
    EXPECT_THROW((void)chi_square_homogeneity(t), InsufficientDataError);

    ContingencyTable padded;
    padded.counts = {{10, 0, 0}, {0, 0, 0}, {0, 10, 0}};
    const auto r = chi_square_homogeneity(padded);
    EXPECT_EQ(r.rows, 2U);
    EXPECT_EQ(r.columns, 2U);
    EXPECT_NEAR(r.statistic, 20.0, 1e-9);
}

TEST(Bonferroni, Examples) {
    const std::vector<double> p{0.02, 0.5, 0.0};
    const auto adjusted = bonferroni(p, 6);
    EXPECT_NEAR(adjusted[0], 0.12, 1e-15);
    EXPECT_EQ(adjusted[1], 1.0);
    EXPECT_EQ(adjusted[2], 0.0);
    EXPECT_THROW((void)bonferroni(p, 2), ValidationError);
}
