#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace sssn {

/// n x p panel of finite reals, row t = observation at time t + 1.
class PanelSeries {
public:
    /// Throws DimensionMismatch on an empty matrix and InvalidArgument on
    /// any non-finite entry.
    explicit PanelSeries(Eigen::MatrixXd data);

    [[nodiscard]] const Eigen::MatrixXd& data() const noexcept { return data_; }
    [[nodiscard]] std::size_t n() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    [[nodiscard]] std::size_t p() const noexcept { return static_cast<std::size_t>(data_.cols()); }

private:
    Eigen::MatrixXd data_;
};

/// Exact decimal ratio num / 10^scale, used so that floors such as
/// floor(n * 0.1) are taken on the value the user wrote, not on its
/// binary approximation.
struct DecimalRatio {
    std::int64_t num = 0;
    int scale = 0;

    /// Parses a plain decimal literal ("0.04", "1e-2" is rejected).
    [[nodiscard]] static DecimalRatio parse(std::string_view text);
    /// Uses the shortest decimal string that round-trips to `value`.
    [[nodiscard]] static DecimalRatio from_double(double value);

    [[nodiscard]] double to_double() const noexcept;
    /// floor(n * value) for a nonnegative value, computed exactly.
    [[nodiscard]] std::size_t floor_times(std::size_t n) const;
};

/// Index arithmetic of the three-block split with trimming.
///
/// Blocks (1-based, inclusive): direction estimation uses rows 1..m1 and
/// n-m1+1..n; the tested middle block is rows m+1..n-m (length N); the
/// buffers of length m2 separate the two.
struct SplitPlan {
    double epsilon = 0.0;
    double eta = 0.0;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t m1 = 0;
    std::size_t m2 = 0;
    std::size_t N = 0;
};

inline constexpr double kDefaultEpsilon = 0.1;
inline constexpr double kDefaultEta = 0.04;

/// Throws InvalidSplit unless 0 < eta < epsilon < 1/2, and
/// InsufficientSample when m1 < 1, m2 < 1 or N < 4.
[[nodiscard]] SplitPlan make_split_plan(std::size_t n, DecimalRatio epsilon, DecimalRatio eta);
[[nodiscard]] SplitPlan make_split_plan(std::size_t n, double epsilon, double eta);

struct ProjectedSeries {
    Eigen::VectorXd y;
    Eigen::VectorXd direction;
    SplitPlan plan;

    [[nodiscard]] std::span<const double> values() const noexcept {
        return {y.data(), static_cast<std::size_t>(y.size())};
    }
};

/// Mean of rows 1..m1 minus mean of rows n-m1+1..n.
[[nodiscard]] Eigen::VectorXd dense_direction(const PanelSeries& x, const SplitPlan& plan);

struct SparseDirection {
    Eigen::VectorXd direction;  ///< +-e_k
    std::size_t index = 0;      ///< selected coordinate k*, 1-based
};

/// Signed basis vector at the coordinate with the largest absolute
/// dense-direction entry. Ties go to the smallest index; an exactly zero
/// maximum gets sign +1.
[[nodiscard]] SparseDirection sparse_direction(const PanelSeries& x, const SplitPlan& plan);

/// y[j] = <direction, X_{j+m}>, j = 1..N.
[[nodiscard]] ProjectedSeries project(const PanelSeries& x, const Eigen::VectorXd& direction,
                                      const SplitPlan& plan);

}  // namespace sssn
