#include <gtest/gtest.h>

#include "helpers.hpp"
#include "sssn/error.hpp"
#include "sssn/panel.hpp"

using namespace sssn;
using testing_util::code_of;
using testing_util::normal_matrix;

TEST(SplitPlan, DefaultSettingsAtN200) {
    const auto plan = make_split_plan(200, 0.1, 0.04);
    EXPECT_EQ(plan.m, 20u);
    EXPECT_EQ(plan.m1, 12u);
    EXPECT_EQ(plan.m2, 8u);
    EXPECT_EQ(plan.N, 160u);
}

TEST(SplitPlan, MultiSettingsAtN100) {
    const auto plan = make_split_plan(100, 0.1, 0.02);
    EXPECT_EQ(plan.m, 10u);
    EXPECT_EQ(plan.m1, 8u);
    EXPECT_EQ(plan.m2, 2u);
    EXPECT_EQ(plan.N, 80u);
}

TEST(SplitPlan, TooShortSeries) {
    EXPECT_EQ(code_of([] { (void)make_split_plan(10, 0.1, 0.02); }), ErrorCode::InsufficientSample);
}

TEST(SplitPlan, InvalidRatios) {
    EXPECT_EQ(code_of([] { (void)make_split_plan(200, 0.1, 0.1); }), ErrorCode::InvalidSplit);
    EXPECT_EQ(code_of([] { (void)make_split_plan(200, 0.5, 0.04); }), ErrorCode::InvalidSplit);
    EXPECT_EQ(code_of([] { (void)make_split_plan(200, 0.1, 0.0); }), ErrorCode::InvalidSplit);
    EXPECT_EQ(code_of([] { (void)make_split_plan(200, 0.1, -0.01); }), ErrorCode::InvalidSplit);
}

TEST(SplitPlan, FloorsTheWrittenDecimal) {
    // 100 * 0.29 is 28.999999999999996 in binary floating point.
    EXPECT_EQ(make_split_plan(100, 0.29, 0.01).m, 29u);
    EXPECT_EQ(make_split_plan(100, DecimalRatio::parse("0.29"), DecimalRatio::parse("0.01")).m, 29u);
    // 0.3 - 0.1 must give m1 = floor(0.2 n) exactly.
    EXPECT_EQ(make_split_plan(10, 0.3, 0.1).m1, 2u);
}

TEST(SplitPlan, IdentitiesHoldOverAGrid) {
    for (std::size_t n = 20; n <= 400; n += 7) {
        for (double eps : {0.1, 0.15, 0.2, 0.3, 0.45}) {
            for (double eta : {0.01, 0.02, 0.04, 0.05}) {
                if (eta >= eps) continue;
                try {
                    const auto p = make_split_plan(n, eps, eta);
                    EXPECT_EQ(p.m1 + p.m2, p.m);
                    EXPECT_EQ(2 * p.m + p.N, n);
                    EXPECT_GE(p.m1, 1u);
                    EXPECT_GE(p.N, 4u);
                } catch (const Error& e) {
                    EXPECT_EQ(e.code(), ErrorCode::InsufficientSample);
                }
            }
        }
    }
}

TEST(DecimalRatio, ParseAndFloor) {
    const auto r = DecimalRatio::parse("0.04");
    EXPECT_EQ(r.num, 4);
    EXPECT_EQ(r.scale, 2);
    EXPECT_EQ(DecimalRatio::parse("0.7").floor_times(100), 70u);
    EXPECT_EQ(DecimalRatio::from_double(0.7).floor_times(100), 70u);
    EXPECT_THROW((void)DecimalRatio::parse("abc"), Error);
}

TEST(PanelSeries, RejectsNonFinite) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(5, 2);
    x(2, 1) = std::nan("");
    EXPECT_EQ(code_of([&] { PanelSeries p(x); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { PanelSeries p(Eigen::MatrixXd(0, 3)); }), ErrorCode::DimensionMismatch);
}

TEST(DenseDirection, EqualRowsGiveZero) {
    Eigen::MatrixXd x(50, 3);
    x.rowwise() = Eigen::RowVector3d(1.5, -2.0, 3.0);
    const auto plan = make_split_plan(50, 0.2, 0.05);
    EXPECT_TRUE(dense_direction(PanelSeries(x), plan).isZero(0.0));
}

TEST(DenseDirection, BlockMeansReadOff) {
    const auto plan = make_split_plan(100, 0.1, 0.04);
    Eigen::MatrixXd x = normal_matrix(100, 4, 3);
    const auto m1 = static_cast<Eigen::Index>(plan.m1);
    x.topRows(m1).rowwise() = Eigen::RowVector4d(1, 0, 0, 0);
    x.bottomRows(m1).rowwise() = Eigen::RowVector4d(0, 1, 0, 0);
    const auto d = dense_direction(PanelSeries(x), plan);
    EXPECT_TRUE(d.isApprox(Eigen::Vector4d(1, -1, 0, 0)));
}

TEST(DenseDirection, MatchesTwoLoopMeans) {
    const auto plan = make_split_plan(20, 0.2, 0.05);
    const Eigen::MatrixXd x = normal_matrix(20, 3, 11);
    const auto d = dense_direction(PanelSeries(x), plan);
    for (Eigen::Index k = 0; k < 3; ++k) {
        double head = 0.0, tail = 0.0;
        for (std::size_t i = 0; i < plan.m1; ++i) {
            head += x(static_cast<Eigen::Index>(i), k);
            tail += x(static_cast<Eigen::Index>(20 - 1 - i), k);
        }
        EXPECT_NEAR(d(k), (head - tail) / static_cast<double>(plan.m1), 1e-14);
    }
}

TEST(DenseDirection, PlanMismatch) {
    const auto plan = make_split_plan(200, 0.1, 0.04);
    EXPECT_EQ(code_of([&] { (void)dense_direction(PanelSeries(normal_matrix(100, 2, 1)), plan); }),
              ErrorCode::DimensionMismatch);
}

TEST(DenseDirection, Linear) {
    const auto plan = make_split_plan(60, 0.1, 0.04);
    const Eigen::MatrixXd a = normal_matrix(60, 5, 1);
    const Eigen::MatrixXd b = normal_matrix(60, 5, 2);
    const Eigen::VectorXd lhs = dense_direction(PanelSeries(2.5 * a - 0.7 * b), plan);
    const Eigen::VectorXd rhs = 2.5 * dense_direction(PanelSeries(a), plan) - 0.7 * dense_direction(PanelSeries(b), plan);
    EXPECT_LE((lhs - rhs).norm(), 1e-12 * rhs.norm());
}

namespace {

// Panel whose dense difference equals `diff`: rows 1..m1 hold diff, the rest 0.
PanelSeries with_difference(const Eigen::VectorXd& diff, const SplitPlan& plan) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(plan.n), diff.size());
    x.topRows(static_cast<Eigen::Index>(plan.m1)).rowwise() = diff.transpose();
    return PanelSeries(x);
}

}  // namespace

TEST(SparseDirection, LargestAbsoluteEntryWithSign) {
    const auto plan = make_split_plan(100, 0.1, 0.04);
    const auto s = sparse_direction(with_difference(Eigen::Vector3d(0.1, -2.0, 0.5), plan), plan);
    EXPECT_EQ(s.index, 2u);
    EXPECT_TRUE(s.direction.isApprox(Eigen::Vector3d(0, -1, 0)));
}

TEST(SparseDirection, ZeroDifferencePicksFirstPositive) {
    const auto plan = make_split_plan(100, 0.1, 0.04);
    const auto s = sparse_direction(with_difference(Eigen::Vector3d::Zero(), plan), plan);
    EXPECT_EQ(s.index, 1u);
    EXPECT_EQ(s.direction, Eigen::Vector3d(1, 0, 0));
}

TEST(SparseDirection, TiesGoToSmallestIndex) {
    const auto plan = make_split_plan(100, 0.1, 0.04);
    const auto s = sparse_direction(with_difference(Eigen::Vector4d(0.5, -3.0, 3.0, 1.0), plan), plan);
    EXPECT_EQ(s.index, 2u);
    EXPECT_EQ(s.direction(1), -1.0);
}

TEST(SparseDirection, MatchesExhaustiveScan) {
    const auto plan = make_split_plan(30, 0.2, 0.05);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const PanelSeries x(normal_matrix(30, 5, seed));
        const auto d = dense_direction(x, plan);
        std::size_t best = 0;
        for (std::size_t k = 1; k < 5; ++k) {
            if (std::abs(d(static_cast<Eigen::Index>(k))) > std::abs(d(static_cast<Eigen::Index>(best)))) best = k;
        }
        const auto s = sparse_direction(x, plan);
        EXPECT_EQ(s.index, best + 1);
        EXPECT_EQ(s.direction(static_cast<Eigen::Index>(best)), d(static_cast<Eigen::Index>(best)) < 0 ? -1.0 : 1.0);
        EXPECT_EQ(s.direction.cwiseAbs().sum(), 1.0);
    }
}

TEST(SparseDirection, SignedPermutationEquivariance) {
    const auto plan = make_split_plan(80, 0.1, 0.04);
    const Eigen::MatrixXd x = normal_matrix(80, 6, 5);
    const auto base = sparse_direction(PanelSeries(x), plan);
    const auto y = project(PanelSeries(x), base.direction, plan).y;

    Eigen::PermutationMatrix<Eigen::Dynamic> perm(6);
    perm.indices() << 3, 0, 5, 1, 4, 2;
    Eigen::MatrixXd moved = x * perm.transpose();
    const auto k = static_cast<Eigen::Index>(base.index - 1);
    const Eigen::Index new_col = perm.indices()(k);
    moved.col(new_col) *= -1.0;
    const auto s = sparse_direction(PanelSeries(moved), plan);
    EXPECT_EQ(s.index, static_cast<std::size_t>(new_col) + 1);
    EXPECT_EQ(s.direction(new_col), -base.direction(k));
    const auto y2 = project(PanelSeries(moved), s.direction, plan).y;
    EXPECT_LE((y - y2).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Project, ZeroAndBasisDirections) {
    const auto plan = make_split_plan(50, 0.1, 0.04);
    const Eigen::MatrixXd x = normal_matrix(50, 3, 7);
    EXPECT_TRUE(project(PanelSeries(x), Eigen::Vector3d::Zero(), plan).y.isZero(0.0));
    const auto col = project(PanelSeries(x), Eigen::Vector3d(0, 1, 0), plan);
    ASSERT_EQ(static_cast<std::size_t>(col.y.size()), plan.N);
    for (std::size_t j = 0; j < plan.N; ++j) {
        EXPECT_EQ(col.y(static_cast<Eigen::Index>(j)), x(static_cast<Eigen::Index>(plan.m + j), 1));
    }
}

TEST(Project, MatchesInnerProductLoop) {
    const auto plan = make_split_plan(70, 0.1, 0.04);
    const Eigen::MatrixXd x = normal_matrix(70, 4, 8);
    const Eigen::VectorXd d = normal_matrix(4, 1, 9);
    const auto y = project(PanelSeries(x), d, plan).y;
    for (std::size_t j = 0; j < plan.N; ++j) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < 4; ++k) s += d(k) * x(static_cast<Eigen::Index>(j + plan.m), k);
        EXPECT_NEAR(y(static_cast<Eigen::Index>(j)), s, 1e-13);
    }
}

TEST(Project, TranslationShiftsByInnerProduct) {
    const auto plan = make_split_plan(70, 0.1, 0.04);
    const Eigen::MatrixXd x = normal_matrix(70, 4, 8);
    const Eigen::VectorXd d = normal_matrix(4, 1, 9);
    const Eigen::RowVectorXd c = normal_matrix(1, 4, 10);
    const Eigen::MatrixXd shifted = x.rowwise() + c;
    const auto y = project(PanelSeries(x), d, plan).y;
    const auto y2 = project(PanelSeries(shifted), d, plan).y;
    const double dc = c.dot(d.transpose());
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        EXPECT_LE(testing_util::rel_diff(y2(j), y(j) + dc), 1e-10);
    }
}

TEST(Project, WrongDirectionLength) {
    const auto plan = make_split_plan(50, 0.1, 0.04);
    EXPECT_EQ(code_of([&] { (void)project(PanelSeries(normal_matrix(50, 3, 1)), Eigen::Vector2d(1, 1), plan); }),
              ErrorCode::DimensionMismatch);
}
