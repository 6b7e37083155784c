#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sssn/null_dist.hpp"
#include "sssn/outcome.hpp"
#include "sssn/panel.hpp"

namespace sssn {

/// Result of the self-normalized CUSUM scan over k = 1..N-1.
struct SnScanResult {
    double statistic = 0.0;     ///< max_k T(k) / sqrt(V(k)), signed
    std::size_t argmax_k = 0;   ///< 1-based k attaining the maximum
    /// Per-k ratios (index k-1) when requested; NaN where V(k) = 0.
    std::vector<double> per_k;
};

/// Self-normalized single change-point statistic of a scalar series:
///
///   T(k) = N^{-1/2} sum_{t<=k} (y_t - ybar)
///   V(k) = N^{-2} [ sum_{t<=k} (S_{1,t} - t/k S_{1,k})^2
///                 + sum_{t>k} (S_{t,N} - (N-t+1)/(N-k) S_{k+1,N})^2 ]
///
/// maximized over k without absolute value. k with V(k) = 0 are skipped.
/// O(N). Throws InsufficientSample if N < 4, DegenerateSeries if every
/// V(k) vanishes.
[[nodiscard]] SnScanResult sn_statistic(std::span<const double> y, bool keep_per_k = false);

/// Classical univariate test: the statistic above calibrated against a G
/// null. Locations are 1-based positions in y.
[[nodiscard]] TestOutcome sn_univariate_test(std::span<const double> y, double alpha, const NullSample& null);

/// m + argmax_k: position of the estimated change in the original panel.
[[nodiscard]] std::size_t estimate_location(const SnScanResult& scan, const SplitPlan& plan) noexcept;

/// Sample-split single change-point test of a panel. Dense projects onto the
/// difference of the end-block means, sparse onto the signed coordinate with
/// the largest difference, Bonferroni runs both at alpha / 2.
[[nodiscard]] TestOutcome test_single(const PanelSeries& x, const SplitPlan& plan, double alpha,
                                      Projection mode, const NullSample& null);
[[nodiscard]] TestOutcome test_single(const PanelSeries& x, double epsilon, double eta, double alpha,
                                      Projection mode, const NullSample& null);

}  // namespace sssn
