#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "pate/series.hpp"
#include "test_util.hpp"

using namespace pate;

TEST(ExtractEvents, MaximalRuns) {
    const auto ev = extract_events(LabelSeries::from_ints({0, 1, 1, 0, 1}));
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[0], (Interval{2, 3}));
    EXPECT_EQ(ev[1], (Interval{5, 5}));
}

TEST(ExtractEvents, NoPositives) { EXPECT_TRUE(extract_events(LabelSeries::from_ints({0, 0, 0})).empty()); }

TEST(ExtractEvents, SingleFullRun) {
    const auto ev = extract_events(LabelSeries::from_ints({1, 1, 1}));
    ASSERT_EQ(ev.size(), 1u);
    EXPECT_EQ(ev[0], (Interval{1, 3}));
}

TEST(ExtractEvents, RoundTripsRandomLabels) {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        const auto y = LabelSeries::from_ints(testutil::random_binary(rng, 1 + rep % 50, 0.4));
        EXPECT_EQ(extract_events(y).to_labels(), y);
    }
}

TEST(EventSet, RejectsOverlapAndAdjacency) {
    EXPECT_THROW(EventSet({{1, 3}, {4, 5}}, EventKind::anomaly, 10), InvalidInput);
    EXPECT_THROW(EventSet({{1, 3}, {3, 5}}, EventKind::anomaly, 10), InvalidInput);
    EXPECT_THROW(EventSet({{4, 5}, {1, 2}}, EventKind::anomaly, 10), InvalidInput);
    EXPECT_THROW(EventSet({{9, 11}}, EventKind::anomaly, 10), InvalidInput);
    EXPECT_NO_THROW(EventSet({{1, 3}, {5, 5}}, EventKind::prediction, 10));
}

TEST(Series, RejectsEmptyAndNonFinite) {
    EXPECT_THROW(ScoreSeries(std::vector<double>{}), InvalidInput);
    EXPECT_THROW(ScoreSeries({0.1, std::nan("")}), InvalidInput);
    EXPECT_THROW(ScoreSeries({std::numeric_limits<double>::infinity()}), InvalidInput);
    EXPECT_THROW(LabelSeries::from_ints({0, 2}), InvalidInput);
    EXPECT_THROW(LabelSeries(std::vector<std::uint8_t>{}), InvalidInput);
}

TEST(ThresholdScores, GreaterOrEqual) {
    const auto p = threshold_scores(ScoreSeries({0.1, 0.9, 0.5}), 0.5);
    EXPECT_EQ(p, LabelSeries::from_ints({0, 1, 1}));
}

TEST(ThresholdScores, MinimumPredictsEverythingAboveMaxNothing) {
    const ScoreSeries s({0.3, -2.0, 7.5, 0.0});
    EXPECT_EQ(threshold_scores(s, -2.0).positives(), 4u);
    EXPECT_EQ(threshold_scores(s, std::nextafter(7.5, 8.0)).positives(), 0u);
}

TEST(ThresholdScores, NestedAcrossThresholds) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u;
    std::vector<double> v(300);
    for (auto& x : v) x = u(rng);
    const ScoreSeries s(v);
    const auto grid = threshold_grid(s);
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const auto hi = threshold_scores(s, grid[j - 1]);
        const auto lo = threshold_scores(s, grid[j]);
        for (std::size_t i = 0; i < v.size(); ++i) EXPECT_LE(hi[i], lo[i]);
    }
}

TEST(ThresholdGrid, UniqueValuesPlusSentinel) {
    const auto g = threshold_grid(ScoreSeries({0.2, 0.8, 0.8}));
    ASSERT_EQ(g.size(), 3u);
    EXPECT_GT(g[0], 0.8);
    EXPECT_EQ(g[0], std::nextafter(0.8, 1.0));
    EXPECT_EQ(g[1], 0.8);
    EXPECT_EQ(g[2], 0.2);
}

TEST(ThresholdGrid, BinaryAndConstant) {
    const auto b = threshold_grid(ScoreSeries({0, 1, 1, 0}));
    ASSERT_EQ(b.size(), 3u);
    EXPECT_GT(b[0], 1.0);
    EXPECT_EQ(b[1], 1.0);
    EXPECT_EQ(b[2], 0.0);
    const auto c = threshold_grid(ScoreSeries({0.5, 0.5, 0.5}));
    ASSERT_EQ(c.size(), 2u);
    EXPECT_GT(c[0], 0.5);
    EXPECT_EQ(c[1], 0.5);
}

TEST(ThresholdGrid, ExhaustiveContainsEveryValueStrictlyDecreasing) {
    std::mt19937_64 rng(11);
    const auto in = testutil::random_instance(rng, 500, 40);
    const ScoreSeries s(in.scores);
    const auto g = threshold_grid(s);
    for (std::size_t j = 1; j < g.size(); ++j) EXPECT_LT(g[j], g[j - 1]);
    for (const double v : in.scores) EXPECT_NE(std::find(g.begin() + 1, g.end(), v), g.end());
    EXPECT_EQ(threshold_scores(s, g[0]).positives(), 0u);
    EXPECT_EQ(threshold_scores(s, g.back()).positives(), s.size());
}

TEST(ThresholdGrid, QuantileKeepsEndsAndSize) {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
    const auto g = threshold_grid(ScoreSeries(v), GridPolicy::quantile(11));
    ASSERT_EQ(g.size(), 12u);
    EXPECT_EQ(g[1], 999.0);
    EXPECT_EQ(g.back(), 0.0);
    for (std::size_t j = 1; j < g.size(); ++j) EXPECT_LT(g[j], g[j - 1]);
    EXPECT_THROW(GridPolicy::quantile(1), InvalidInput);
    EXPECT_EQ(GridPolicy::quantile(11).describe(), "quantile:11");
}
