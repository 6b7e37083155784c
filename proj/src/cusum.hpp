#pragma once

// Prefix-sum machinery shared by the single and multiple change-point scans.
//
// Every self-normalizer term in both statistics is a "bridge residual" of
// the partial-sum path P_j = y_1 + ... + y_j (P_0 = 0):
//
//   bridge(s, e) = sum_{j=s}^{e} (P_j - P_s - (j - s)/(e - s) * (P_e - P_s))^2
//
// i.e. the squared distance of the path from the chord joining (s, P_s) and
// (e, P_e). Expanding the square gives an O(1) evaluation from cumulative
// sums of P_j, P_j^2 and j * P_j.

#include <cstddef>
#include <span>
#include <vector>

namespace sssn::detail {

/// Relative size below which a bridge residual counts as exactly zero.
inline constexpr long double kZeroRelTol = 1e-12L;

struct BridgeSum {
    long double value = 0;      ///< the residual sum of squares
    long double reference = 0;  ///< sum of (P_j - P_s)^2, the scale value is compared to
};

class CusumTable {
public:
    /// Centers and scales y (both statistics are invariant to either) and
    /// builds the cumulative tables in extended precision.
    explicit CusumTable(std::span<const double> y);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    /// True when y has no variation beyond rounding noise.
    [[nodiscard]] bool constant() const noexcept { return constant_; }

    [[nodiscard]] long double partial(std::size_t j) const noexcept { return P_[j]; }
    [[nodiscard]] const std::vector<double>& partials() const noexcept { return P_double_; }

    /// Requires s < e <= size().
    [[nodiscard]] BridgeSum bridge(std::size_t s, std::size_t e) const noexcept;

private:
    std::size_t n_ = 0;
    bool constant_ = false;
    std::vector<long double> P_;    // P_0..P_N
    std::vector<double> P_double_;  // same, rounded, for the hot pair loop
    std::vector<long double> cP_;   // cP_[k] = sum_{j<k} P_j
    std::vector<long double> cPP_;  // sum_{j<k} P_j^2
    std::vector<long double> cjP_;  // sum_{j<k} j * P_j
};

[[nodiscard]] inline bool is_zero(const BridgeSum& a, const BridgeSum& b) noexcept {
    return a.value + b.value <= kZeroRelTol * (a.reference + b.reference);
}

}  // namespace sssn::detail
