#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sssn/dgp.hpp"
#include "sssn/sn_single.hpp"

using namespace sssn;
using testing_util::code_of;
using testing_util::normals;
using testing_util::rel_diff;

TEST(SnStatistic, EveryKMatchesDoubleLoop) {
    std::size_t checked = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const std::size_t N = 4 + seed % 57;
        const auto y = normals(N, seed);
        const auto scan = sn_statistic(y, true);
        ASSERT_EQ(scan.per_k.size(), N - 1);
        for (std::size_t k = 1; k < N; ++k) {
            const double expected = oracle::T(y, k) / std::sqrt(oracle::V(y, k));
            EXPECT_LE(rel_diff(scan.per_k[k - 1], expected), 1e-10) << "N=" << N << " k=" << k;
            ++checked;
        }
        EXPECT_LE(rel_diff(scan.statistic, *oracle::G(y)), 1e-10);
        EXPECT_EQ(scan.per_k[scan.argmax_k - 1], scan.statistic);
    }
    EXPECT_GT(checked, 1000u);
}

TEST(SnStatistic, LastUnitSpike) {
    std::vector<double> y(30, 0.0);
    y.back() = 1.0;
    const auto scan = sn_statistic(y, true);
    EXPECT_LE(rel_diff(scan.statistic, *oracle::G(y)), 1e-10);
    // T(k) = -k / N^{3/2} < 0 for every k < N.
    for (std::size_t k = 1; k + 1 < y.size(); ++k) {
        if (!std::isnan(scan.per_k[k - 1])) EXPECT_LT(scan.per_k[k - 1], 0.0);
    }
}

TEST(SnStatistic, CenteredSumVanishes) {
    const auto y = normals(40, 1);
    EXPECT_NEAR(oracle::T(y, y.size()), 0.0, 1e-12);
}

TEST(SnStatistic, ConstantSeriesIsDegenerate) {
    const std::vector<double> y(20, 3.25);
    EXPECT_EQ(code_of([&] { (void)sn_statistic(y); }), ErrorCode::DegenerateSeries);
}

TEST(SnStatistic, TooShort) {
    const std::vector<double> y{1.0, 2.0, 0.5};
    EXPECT_EQ(code_of([&] { (void)sn_statistic(y); }), ErrorCode::InsufficientSample);
}

TEST(SnStatistic, SignedNotAbsolute) {
    // An upward step makes every CUSUM strongly negative, so the signed
    // maximum is negative; the mirrored series is a clear rejection.
    auto up = normals(100, 3);
    for (std::size_t t = 50; t < 100; ++t) up[t] += 20.0;
    auto down = up;
    for (auto& v : down) v = -v;
    EXPECT_LT(sn_statistic(up).statistic, 0.0);
    EXPECT_GT(sn_statistic(down).statistic, 5.39);
}

TEST(SnStatistic, TranslationAndScaleInvariance) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto y = normals(160, seed);
        const double base = sn_statistic(y).statistic;
        auto moved = y;
        for (auto& v : moved) v = 3.7 * v - 120.0;
        EXPECT_LE(rel_diff(sn_statistic(moved).statistic, base), 1e-10);
    }
}

TEST(SnStatistic, PiecewiseConstantSkipsZeroNormalizers) {
    std::vector<double> y(20, 0.0);
    for (std::size_t t = 10; t < 20; ++t) y[t] = 1.0;
    // Only k = 10 splits the series into two constant halves, so V(10) = 0
    // and that k is excluded; the others remain.
    const auto scan = sn_statistic(y, true);
    EXPECT_TRUE(std::isnan(scan.per_k[9]));
    EXPECT_NE(scan.argmax_k, 10u);
    EXPECT_LE(rel_diff(scan.statistic, *oracle::G(y)), 1e-10);
}

TEST(EstimateLocation, ShiftsByM) {
    SnScanResult scan;
    SplitPlan plan;
    scan.argmax_k = 80;
    plan.m = 20;
    EXPECT_EQ(estimate_location(scan, plan), 100u);
    scan.argmax_k = 1;
    plan.m = 10;
    EXPECT_EQ(estimate_location(scan, plan), 11u);
}

TEST(UnivariateTest, PublishedThresholdAndStep) {
    const auto null = NullSample::published(NullKind::G);
    auto y = normals(160, 4);
    const auto calm = sn_univariate_test(y, 0.05, null);
    EXPECT_DOUBLE_EQ(calm.components.front().threshold, 5.39);
    // The scan is one-sided: a drop in the mean gives a positive statistic.
    for (std::size_t t = 80; t < 160; ++t) y[t] -= 5.0;
    const auto out = sn_univariate_test(y, 0.05, null);
    EXPECT_TRUE(out.reject);
    EXPECT_TRUE(out.components.front().p_value.at_most(0.01));
    EXPECT_GT(out.components.front().statistic, 5.39);
    EXPECT_NEAR(static_cast<double>(out.locations.front()), 80.0, 5.0);
}

TEST(UnivariateTest, NullRejectionRate) {
    const auto null = NullSample::published(NullKind::G);
    int rejections = 0;
    const int R = 2000;
    for (int r = 0; r < R; ++r) {
        rejections += sn_univariate_test(normals(160, 1000 + r), 0.05, null).reject;
    }
    EXPECT_NEAR(rejections / static_cast<double>(R), 0.05, 0.015);
}

namespace {

DgpSpec iid_spec(std::size_t n, std::size_t p, std::uint64_t seed) {
    DgpSpec d;
    d.n = n;
    d.p = p;
    d.cov.p = p;
    d.seed = seed;
    return d;
}

}  // namespace

TEST(TestSingle, DenseShiftIsLocated) {
    const auto null = NullSample::published(NullKind::G);
    const std::size_t n = 200, p = 50;
    const auto x = gen_panel(iid_spec(n, p, 17), preset_shift("dense_mid", 10.0, n, p));
    const auto out = test_single(x, 0.1, 0.04, 0.05, Projection::Dense, null);
    EXPECT_TRUE(out.reject);
    EXPECT_EQ(out.mode(), "dense");
    ASSERT_EQ(out.locations.size(), 1u);
    EXPECT_NEAR(static_cast<double>(out.locations.front()), 100.0, 10.0);
}

TEST(TestSingle, SparseReportsCoordinate) {
    const auto null = NullSample::published(NullKind::G);
    const std::size_t n = 200, p = 20;
    const auto x = gen_panel(iid_spec(n, p, 18), preset_shift("sparse_mid", 3.0, n, p));
    const auto out = test_single(x, 0.1, 0.04, 0.05, Projection::Sparse, null);
    EXPECT_TRUE(out.reject);
    EXPECT_EQ(out.components.front().sparse_index, 3u);
}

TEST(TestSingle, BonferroniRunsBothAtHalfLevel) {
    const auto null = NullSample::published(NullKind::G);
    const auto x = gen_panel(iid_spec(200, 10, 19));
    const auto out = test_single(x, 0.1, 0.04, 0.05, Projection::Bonferroni, null);
    ASSERT_EQ(out.components.size(), 2u);
    EXPECT_EQ(out.components[0].projection, Projection::Dense);
    EXPECT_EQ(out.components[1].projection, Projection::Sparse);
    EXPECT_DOUBLE_EQ(out.components[0].threshold, null.threshold(0.025));
    EXPECT_EQ(out.reject, out.components[0].reject || out.components[1].reject);
}

TEST(TestSingle, BonferroniDecisionWithSimulatedNull) {
    std::vector<double> sample(999);
    std::iota(sample.begin(), sample.end(), 1.0);
    const auto null = NullSample::simulated(NullKind::G, sample, {100, 999, 1, 0});
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto x = gen_panel(iid_spec(100, 4, seed));
        const auto out = test_single(x, 0.1, 0.04, 0.2, Projection::Bonferroni, null);
        const double pmin = std::min(out.components[0].p_value.value, out.components[1].p_value.value);
        EXPECT_EQ(out.reject, pmin <= 0.1);
    }
}

TEST(TestSingle, ConstantPanelIsDegenerate) {
    const PanelSeries x(Eigen::MatrixXd::Constant(100, 3, 2.0));
    const auto null = NullSample::published(NullKind::G);
    EXPECT_EQ(code_of([&] { (void)test_single(x, 0.1, 0.04, 0.05, Projection::Dense, null); }),
              ErrorCode::DegenerateSeries);
}

TEST(TestSingle, RejectsWrongNullKind) {
    const auto x = gen_panel(iid_spec(100, 3, 1));
    const auto gm = NullSample::published(NullKind::GM);
    EXPECT_EQ(code_of([&] { (void)test_single(x, 0.1, 0.04, 0.05, Projection::Dense, gm); }),
              ErrorCode::InvalidArgument);
}
