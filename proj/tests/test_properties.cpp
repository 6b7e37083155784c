// Invariances of the panel tests on random panels.
#include <gtest/gtest.h>

#include <Eigen/QR>
#include <numeric>
#include <random>

#include "helpers.hpp"
#include "sssn/sn_multi.hpp"
#include "sssn/sn_single.hpp"

using namespace sssn;
using testing_util::rel_diff;

namespace {

constexpr double kTol = 1e-9;
constexpr int kPanels = 100;

struct Draw {
    Eigen::MatrixXd x;
    Eigen::RowVectorXd shift;
    double scale;
};

Draw draw(std::uint64_t seed, std::size_t n, std::size_t p) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_real_distribution<double> s(0.1, 10.0);
    Draw d{testing_util::normal_matrix(n, p, seed), Eigen::RowVectorXd(static_cast<Eigen::Index>(p)), s(rng)};
    for (Eigen::Index k = 0; k < d.shift.size(); ++k) d.shift(k) = u(rng);
    // A mean change in the middle so statistics are not all near zero.
    d.x.bottomRows(static_cast<Eigen::Index>(n / 2)).array() += 0.3;
    return d;
}

double single_stat(const Eigen::MatrixXd& x, Projection mode) {
    return test_single(PanelSeries(x), 0.1, 0.04, 0.05, mode, NullSample::published(NullKind::G))
        .lead()
        .statistic;
}

double multi_stat(const Eigen::MatrixXd& x, Projection mode) {
    return test_multi(PanelSeries(x), 0.1, 0.02, 0.05, mode, NullSample::published(NullKind::GM))
        .lead()
        .statistic;
}

Eigen::MatrixXd random_orthogonal(std::size_t p, std::uint64_t seed) {
    const Eigen::MatrixXd a = testing_util::normal_matrix(p, p, seed);
    return Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
}

}  // namespace

TEST(DenseProperty, TranslationAndScale) {
    for (int i = 0; i < kPanels; ++i) {
        const auto d = draw(1000 + i, 100, 8);
        const double base = single_stat(d.x, Projection::Dense);
        EXPECT_LE(rel_diff(single_stat(d.x.rowwise() + d.shift, Projection::Dense), base), kTol);
        EXPECT_LE(rel_diff(single_stat(d.x * d.scale, Projection::Dense), base), kTol);
    }
}

TEST(DenseProperty, OrthogonalRotation) {
    for (int i = 0; i < kPanels; ++i) {
        const auto d = draw(2000 + i, 100, 8);
        const Eigen::MatrixXd q = random_orthogonal(8, 9000 + i);
        EXPECT_LE(rel_diff(single_stat(d.x * q.transpose(), Projection::Dense),
                           single_stat(d.x, Projection::Dense)),
                  kTol);
    }
}

TEST(SparseProperty, SignedPermutationAndScale) {
    for (int i = 0; i < kPanels; ++i) {
        const auto d = draw(3000 + i, 100, 8);
        std::mt19937_64 rng(i);
        std::vector<int> perm(8);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Eigen::MatrixXd y(d.x.rows(), 8);
        for (int k = 0; k < 8; ++k) y.col(k) = (rng() % 2 ? -1.0 : 1.0) * d.x.col(perm[k]);
        const double base = single_stat(d.x, Projection::Sparse);
        EXPECT_LE(rel_diff(single_stat(y, Projection::Sparse), base), kTol);
        EXPECT_LE(rel_diff(single_stat(d.x * d.scale, Projection::Sparse), base), kTol);
        EXPECT_LE(rel_diff(single_stat(d.x.rowwise() + d.shift, Projection::Sparse), base), kTol);
    }
}

TEST(MultiProperty, TranslationAndScale) {
    for (int i = 0; i < kPanels; ++i) {
        const auto d = draw(4000 + i, 100, 5);
        const double base = multi_stat(d.x, Projection::Dense);
        EXPECT_LE(rel_diff(multi_stat(d.x.rowwise() + d.shift, Projection::Dense), base), kTol);
        EXPECT_LE(rel_diff(multi_stat(d.x * d.scale, Projection::Dense), base), kTol);
    }
}

TEST(BonferroniProperty, ComponentsMatchSingleProjections) {
    for (int i = 0; i < 20; ++i) {
        const auto d = draw(5000 + i, 120, 6);
        const auto outcome = test_single(PanelSeries(d.x), 0.1, 0.04, 0.05, Projection::Bonferroni,
                                         NullSample::published(NullKind::G));
        ASSERT_EQ(outcome.components.size(), 2u);
        EXPECT_EQ(outcome.components[0].statistic, single_stat(d.x, Projection::Dense));
        EXPECT_EQ(outcome.components[1].statistic, single_stat(d.x, Projection::Sparse));
        EXPECT_EQ(outcome.reject, outcome.components[0].reject || outcome.components[1].reject);
    }
}

TEST(StatisticProperty, SingleScanAffineInvariant) {
    for (int i = 0; i < kPanels; ++i) {
        auto y = testing_util::normals(60, 6000 + i);
        const double base = sn_statistic(y).statistic;
        for (auto& v : y) v = 3.5 * v - 2.0;
        EXPECT_LE(rel_diff(sn_statistic(y).statistic, base), kTol);
    }
}

TEST(StatisticProperty, MultiScanSignAndReversal) {
    // The multiple scan uses absolute values, so negation leaves it
    // unchanged; reversing time swaps the forward and backward parts.
    for (int i = 0; i < 30; ++i) {
        auto y = testing_util::normals(40, 7000 + i);
        const auto base = multi_scan(y);
        for (auto& v : y) v = -v;
        EXPECT_LE(rel_diff(multi_scan(y).statistic, base.statistic), kTol);
        std::reverse(y.begin(), y.end());
        const auto rev = multi_scan(y);
        EXPECT_LE(rel_diff(rev.forward_max, base.backward_max), kTol);
        EXPECT_LE(rel_diff(rev.backward_max, base.forward_max), kTol);
    }
}
