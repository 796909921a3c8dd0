#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"

using namespace siotbridge;

namespace {

RunRow row(std::string mode, std::string value, std::uint32_t rep, std::string src, std::uint32_t reached,
           std::uint32_t denom) {
    RunRow r;
    r.campaign = "c";
    r.interest = 3;
    r.mode = std::move(mode);
    r.kinds = r.mode == "friendships" ? "none" : "POR";
    r.sweep_var = value == "-" ? "none" : "spread";
    r.sweep_value = std::move(value);
    r.replicate = rep;
    r.source = std::move(src);
    r.reached = reached;
    r.denominator = denom;
    r.irn_pct = denom ? 100.0 * reached / denom : 0.0;
    return r;
}

SourceRun reach_run(NodeId src, std::vector<NodeId> nodes, std::vector<std::uint8_t> hops) {
    SourceRun r;
    r.source = src;
    r.reached = static_cast<std::uint32_t>(nodes.size());
    r.reached_nodes = std::move(nodes);
    r.reached_hops = std::move(hops);
    return r;
}

} // namespace

TEST(MeanCi, StudentFreeNormalInterval) {
    const auto one = mean_ci({42.0});
    EXPECT_DOUBLE_EQ(one.mean, 42.0);
    EXPECT_TRUE(std::isnan(one.ci));
    const auto same = mean_ci({10.0 / 3, 10.0 / 3, 10.0 / 3});
    EXPECT_EQ(same.ci, 0.0);
    const std::vector<double> v{40, 60, 50, 30};
    const double m = 45.0;
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    const auto c = mean_ci(v);
    EXPECT_DOUBLE_EQ(c.mean, m);
    EXPECT_NEAR(c.ci, 1.96 * std::sqrt(ss / 3) / 2.0, 1e-12);
}

TEST(MeanIrn, SingleSourceHalfReached) {
    const auto s = mean_irn_pct({row("friendships", "-", 0, "a", 2, 4)});
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].label, "friendships:none");
    EXPECT_DOUBLE_EQ(s[0].y[0], 50.0);
    EXPECT_TRUE(std::isnan(s[0].ci[0]));
}

TEST(MeanIrn, AllReachedHasZeroInterval) {
    std::vector<RunRow> rows;
    for (std::uint32_t rep = 0; rep < 5; ++rep) {
        for (const char* src : {"a", "b", "c"}) rows.push_back(row("enhanced", "-", rep, src, 7, 7));
    }
    const auto s = mean_irn_pct(rows);
    EXPECT_EQ(s[0].y[0], 100.0);
    EXPECT_EQ(s[0].ci[0], 0.0);
}

TEST(MeanIrn, SourcesAveragedWithinReplicateFirst) {
    // rep0: 40, 60 -> 50; rep1: 100 -> 100; per-replicate mean 75, pooled 66.67
    const std::vector<RunRow> rows{row("friendships", "-", 0, "a", 2, 5), row("friendships", "-", 0, "b", 3, 5),
                                   row("friendships", "-", 1, "a", 5, 5)};
    EXPECT_DOUBLE_EQ(mean_irn_pct(rows)[0].y[0], 75.0);
    EXPECT_NEAR(mean_irn_pct(rows, Averaging::Pooled)[0].y[0], 200.0 / 3, 1e-12);
    const std::vector<RunRow> two{row("friendships", "-", 0, "a", 2, 5), row("friendships", "-", 0, "b", 3, 5)};
    EXPECT_DOUBLE_EQ(mean_irn_pct(two)[0].y[0], 50.0);
}

TEST(MeanIrn, SeriesOrderedByNumericSweep) {
    std::vector<RunRow> rows;
    for (const char* v : {"1", "0.1", "0.5"}) {
        rows.push_back(row("enhanced", v, 0, "a", 1, 2));
        rows.push_back(row("friendships", v, 0, "a", 1, 4));
    }
    const auto s = mean_irn_pct(rows);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].label, "enhanced:POR");
    EXPECT_EQ(s[0].x, (std::vector<double>{0.1, 0.5, 1.0}));
    EXPECT_EQ(s[0].x_label, (std::vector<std::string>{"0.1", "0.5", "1"}));
    EXPECT_DOUBLE_EQ(s[1].y[2], 25.0);
}

TEST(MeanIrn, KindSweepUsesModeAsLabelAndSweepOrderAsX) {
    std::vector<RunRow> rows;
    for (const char* k : {"POR+SOR", "POR"}) {
        auto r = row("enhanced", k, 0, "a", 1, 2);
        r.sweep_var = "kinds";
        r.kinds = k;
        rows.push_back(r);
    }
    const auto s = mean_irn_pct(rows);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].label, "enhanced");
    EXPECT_EQ(s[0].x_label, (std::vector<std::string>{"POR+SOR", "POR"}));
    EXPECT_EQ(s[0].x, (std::vector<double>{0, 1}));
}

TEST(MeanIrn, InvariantUnderRowPermutation) {
    std::mt19937_64 rng(3);
    std::vector<RunRow> rows;
    for (std::uint32_t rep = 0; rep < 6; ++rep) {
        for (int s = 0; s < 9; ++s) {
            for (const char* v : {"0.2", "0.7"}) {
                rows.push_back(row(s % 2 ? "enhanced" : "friendships", v, rep, "s" + std::to_string(s),
                                   static_cast<std::uint32_t>(rng() % 14), 13 + static_cast<std::uint32_t>(rng() % 3)));
            }
        }
    }
    const auto ref = series_to_csv(mean_irn_pct(rows));
    for (int k = 0; k < 5; ++k) {
        std::shuffle(rows.begin(), rows.end(), rng);
        EXPECT_EQ(series_to_csv(mean_irn_pct(rows)), ref);
    }
}

TEST(IrnByHop, FlatChainAndOrigin) {
    auto star = row("enhanced", "-", 0, "a", 4, 4);
    star.hop_hist = {0, 4, 0, 0};
    auto chain = row("friendships", "-", 0, "a", 3, 4);
    chain.hop_hist = {0, 1, 1, 1};
    const auto s = irn_by_hop({star, chain}, 3);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].label, "enhanced:POR");
    EXPECT_EQ(s[0].y, (std::vector<double>{0, 100, 100, 100}));
    EXPECT_EQ(s[1].y, (std::vector<double>{0, 25, 50, 75}));
    EXPECT_EQ(s[1].x, (std::vector<double>{0, 1, 2, 3}));

    auto swept = chain;
    swept.sweep_value = "0.5";
    swept.sweep_var = "spread";
    EXPECT_EQ(irn_by_hop({swept}, 1)[0].label, "friendships:none@0.5");

    auto bare = row("friendships", "-", 0, "a", 3, 4);
    EXPECT_THROW(irn_by_hop({bare}, 3), Error);
}

TEST(MeanHops, SkipsRunsReachingNobody) {
    auto a = row("enhanced", "-", 0, "a", 2, 4);
    a.mean_hops = 1.5;
    auto b = row("enhanced", "-", 0, "b", 0, 4);
    auto c = row("enhanced", "-", 0, "c", 1, 4);
    c.mean_hops = 2.5;
    const auto s = mean_hops_series({a, b, c});
    EXPECT_DOUBLE_EQ(s[0].y[0], 2.0);
}

TEST(HopComparison, IdenticalRunsGiveUnitRatio) {
    const std::vector<SourceRun> w{reach_run(0, {1, 2, 3}, {1, 2, 3}), reach_run(4, {5}, {1})};
    const auto c = mean_hops_comparison(w, w);
    ASSERT_EQ(c.pairs.size(), 2u);
    EXPECT_DOUBLE_EQ(c.ratio, 1.0);
}

TEST(HopComparison, StarUnchangedAndShortcutCounted) {
    const auto star = mean_hops_comparison({reach_run(0, {1, 2, 3}, {1, 1, 1})}, {reach_run(0, {1, 2, 3}, {1, 1, 1})});
    EXPECT_DOUBLE_EQ(star.ratio, 1.0);
    // node 9 only reached with C-IOR and ignored; common {1,4} : (1+1)/2 vs (1+4)/2
    const auto c = mean_hops_comparison({reach_run(0, {1, 4, 9}, {1, 1, 2})}, {reach_run(0, {1, 4}, {1, 4})});
    ASSERT_EQ(c.pairs.size(), 1u);
    EXPECT_EQ(c.pairs[0].common, 2u);
    EXPECT_DOUBLE_EQ(c.ratio, 1.0 / 2.5);
    EXPECT_NE(hop_comparison_to_csv(c, {"s"}).find("# ratio 0.4"), std::string::npos);
}

TEST(HopComparison, NeedsReachDetailAndWarnsOnMissingPairs) {
    SourceRun bare;
    bare.reached = 2;
    EXPECT_THROW(mean_hops_comparison({bare}, {bare}), Error);
    const auto c = mean_hops_comparison({reach_run(0, {1}, {1})}, {reach_run(1, {2}, {1})});
    EXPECT_TRUE(c.pairs.empty());
    EXPECT_TRUE(std::isnan(c.ratio));
    EXPECT_FALSE(c.warnings.empty());
}

TEST(Emit, EmptyInputGivesHeaderOnly) {
    EXPECT_EQ(series_to_csv(mean_irn_pct(std::vector<RunRow>{})), "series,x,x_label,mean,ci_halfwidth\n");
    EXPECT_EQ(series_to_plot_data({}), "");
}

TEST(Emit, CsvAndPlotBlocks) {
    std::vector<RunRow> rows;
    for (std::uint32_t rep = 0; rep < 2; ++rep) {
        rows.push_back(row("friendships", "-", rep, "a", 1, 3));
        rows.push_back(row("enhanced", "-", rep, "a", 3, 3));
    }
    const auto s = mean_irn_pct(rows);
    EXPECT_EQ(series_to_csv(s), "series,x,x_label,mean,ci_halfwidth\n"
                                "enhanced:POR,0,-,100,0\n"
                                "friendships:none,0,-,33.3333,0\n");
    const auto plot = series_to_plot_data(s);
    EXPECT_EQ(plot, "# enhanced:POR\n0 100 0\n\n\n# friendships:none\n0 33.3333 0\n");
    const auto dir = fixtures::temp_dir("emit");
    emit_csv(s, dir + "/a.csv");
    emit_csv(s, dir + "/b.csv");
    EXPECT_EQ(fixtures::slurp(dir + "/a.csv"), fixtures::slurp(dir + "/b.csv"));
    emit_plot_data(s, dir + "/a.dat");
    EXPECT_EQ(fixtures::slurp(dir + "/a.dat"), plot);
}

TEST(Emit, SeriesValidationRejectsRaggedColumns) {
    MetricSeries s;
    s.label = "x";
    s.push(0, "0", 1, 0);
    s.y.push_back(2);
    EXPECT_THROW(series_to_csv({s}), Error);
}
