#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sssn/null_dist.hpp"
#include "sssn/outcome.hpp"
#include "sssn/panel.hpp"

namespace sssn {

/// The scanned pairs (l1, l2) with 1 < l1 < l2 < length, l2 - l1 > 1.
///
/// With stride > 1 both coordinates are restricted to the grid
/// {2, stride, 2 * stride, ..., length - 1}; the edge indices 2 and
/// length - 1 are always kept.
class ScanSet {
public:
    /// Throws InvalidArgument if length < 8 or stride == 0.
    ScanSet(std::size_t length, std::size_t stride = 1);

    [[nodiscard]] std::size_t length() const noexcept { return length_; }
    [[nodiscard]] std::size_t stride() const noexcept { return stride_; }
    /// Sorted grid indices (all of 2..length-1 when stride == 1).
    [[nodiscard]] const std::vector<std::size_t>& grid() const noexcept { return grid_; }
    [[nodiscard]] bool on_grid(std::size_t l) const noexcept { return l < mask_.size() && mask_[l]; }
    [[nodiscard]] bool contains(std::size_t l1, std::size_t l2) const noexcept {
        return l1 > 1 && l2 < length_ && l2 > l1 + 1 && on_grid(l1) && on_grid(l2);
    }

private:
    std::size_t length_;
    std::size_t stride_;
    std::vector<std::size_t> grid_;
    std::vector<bool> mask_;
};

struct MultiScanResult {
    double statistic = 0.0;  ///< forward_max + backward_max
    double forward_max = 0.0;
    double backward_max = 0.0;
    std::pair<std::size_t, std::size_t> forward_argpair{0, 0};
    std::pair<std::size_t, std::size_t> backward_argpair{0, 0};
};

/// T^f(j1,j2,j3) / sqrt(V^f(j1,j2,j3)) on y (1-based indices). Compares the
/// mean of y_{j1..j2} to that of y_{j1..j3}; V^f sums the CUSUM bridge
/// residuals of the two sub-windows. Requires 1 <= j1 <= j2 < j3 <= len
/// (IndexError otherwise); returns nullopt when V^f = 0.
[[nodiscard]] std::optional<double> forward_ratio(std::span<const double> y, std::size_t j1, std::size_t j2,
                                                  std::size_t j3);

/// Backward counterpart comparing y_{j2..j3} with y_{j1..j3}. Requires
/// 1 <= j1 < j2 <= j3 <= len.
[[nodiscard]] std::optional<double> backward_ratio(std::span<const double> y, std::size_t j1, std::size_t j2,
                                                   std::size_t j3);

/// max |forward_ratio(1, l1, l2)| + max |backward_ratio(l1, l2, N)| over the
/// scan set. Pairs with a vanishing normalizer are skipped;
/// DegenerateSeries if a direction has none left.
[[nodiscard]] MultiScanResult multi_scan(std::span<const double> y, const ScanSet& scan);
[[nodiscard]] MultiScanResult multi_scan(std::span<const double> y, std::size_t stride = 1);

/// Multiple change-point test on a panel, same split and projection as the
/// single test, calibrated against a GM null. Locations are the forward
/// break m + l1 and the backward break m + l2 - 1.
[[nodiscard]] TestOutcome test_multi(const PanelSeries& x, const SplitPlan& plan, double alpha,
                                     Projection mode, const NullSample& null_gm, std::size_t stride = 1);
[[nodiscard]] TestOutcome test_multi(const PanelSeries& x, double epsilon, double eta, double alpha,
                                     Projection mode, const NullSample& null_gm, std::size_t stride = 1);

}  // namespace sssn
