#include "sssn/sn_multi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "combine.hpp"
#include "cusum.hpp"
#include "sssn/error.hpp"

namespace sssn {

ScanSet::ScanSet(std::size_t length, std::size_t stride) : length_(length), stride_(stride) {
    if (length < 8) {
        throw Error(ErrorCode::InsufficientSample, "scan length " + std::to_string(length) + " < 8");
    }
    if (stride == 0) {
        throw Error(ErrorCode::InvalidArgument, "stride must be positive");
    }
    mask_.assign(length, false);
    for (std::size_t l = 2; l < length; ++l) {
        if (l % stride == 0 || l == 2 || l == length - 1) {
            mask_[l] = true;
            grid_.push_back(l);
        }
    }
}

namespace {

void check_order(bool ok, std::size_t j1, std::size_t j2, std::size_t j3, std::size_t len) {
    if (!ok) {
        throw Error(ErrorCode::IndexError, "invalid index triple (" + std::to_string(j1) + ", " +
                                               std::to_string(j2) + ", " + std::to_string(j3) +
                                               ") for length " + std::to_string(len));
    }
}

std::optional<double> ratio_from(long double numerator, long double window, const detail::BridgeSum& a,
                                 const detail::BridgeSum& b) {
    if (detail::is_zero(a, b)) return std::nullopt;
    return static_cast<double>(numerator * std::sqrt(window) / std::sqrt(a.value + b.value));
}

}  // namespace

std::optional<double> forward_ratio(std::span<const double> y, std::size_t j1, std::size_t j2, std::size_t j3) {
    check_order(j1 >= 1 && j1 <= j2 && j2 < j3 && j3 <= y.size(), j1, j2, j3, y.size());
    const detail::CusumTable table(y);
    const auto window = static_cast<long double>(j3 - j1 + 1);
    const long double base = table.partial(j1 - 1);
    const long double numerator = (table.partial(j2) - base) -
                                  static_cast<long double>(j2 - j1 + 1) / window * (table.partial(j3) - base);
    return ratio_from(numerator, window, table.bridge(j1 - 1, j2), table.bridge(j2, j3));
}

std::optional<double> backward_ratio(std::span<const double> y, std::size_t j1, std::size_t j2, std::size_t j3) {
    check_order(j1 >= 1 && j1 < j2 && j2 <= j3 && j3 <= y.size(), j1, j2, j3, y.size());
    const detail::CusumTable table(y);
    const auto window = static_cast<long double>(j3 - j1 + 1);
    const long double numerator =
        (table.partial(j3) - table.partial(j2 - 1)) -
        static_cast<long double>(j3 - j2 + 1) / window * (table.partial(j3) - table.partial(j1 - 1));
    return ratio_from(numerator, window, table.bridge(j1 - 1, j2 - 1), table.bridge(j2 - 1, j3));
}

MultiScanResult multi_scan(std::span<const double> y, const ScanSet& scan) {
    const std::size_t N = y.size();
    if (N != scan.length()) {
        throw Error(ErrorCode::DimensionMismatch, "series length " + std::to_string(N) +
                                                      " does not match scan length " +
                                                      std::to_string(scan.length()));
    }
    const detail::CusumTable table(y);
    if (table.constant()) {
        throw Error(ErrorCode::DegenerateSeries, "constant series");
    }
    const std::vector<double>& P = table.partials();

    // Terms depending on one index only: the left window of the forward
    // normalizer and the right window of the backward one.
    std::vector<double> head(N + 1, 0.0), head_ref(N + 1, 0.0);
    std::vector<double> tail(N + 1, 0.0), tail_ref(N + 1, 0.0);
    for (std::size_t k = 1; k < N; ++k) {
        const auto h = table.bridge(0, k);
        head[k] = static_cast<double>(h.value);
        head_ref[k] = static_cast<double>(h.reference);
        const auto t = table.bridge(k, N);
        tail[k] = static_cast<double>(t.value);
        tail_ref[k] = static_cast<double>(t.reference);
    }

    constexpr double tol = static_cast<double>(detail::kZeroRelTol);
    const double total = P[N];
    double best_f = -1.0;
    double best_b = -1.0;
    MultiScanResult out;

    // Forward pair (l1, l2) = (s, e); backward pair (l1, l2) = (s + 1, e + 1).
    // Both need the bridge of the path over [s, e], accumulated in e.
    for (std::size_t s = 1; s + 3 <= N; ++s) {
        const bool forward_row = s >= 2 && scan.on_grid(s);
        const bool backward_row = scan.on_grid(s + 1);
        if (!forward_row && !backward_row) continue;

        const double anchor = P[s];
        const double backward_base = total - anchor;
        const auto back_window = static_cast<double>(N - s);
        double sum_qq = 0.0;
        double sum_dq = 0.0;
        for (std::size_t e = s + 1; e < N; ++e) {
            const double q = P[e] - anchor;
            const auto d = static_cast<double>(e - s);
            sum_qq += q * q;
            sum_dq += d * q;
            if (e < s + 2) continue;
            const double slope = q / d;
            const double sum_dd = d * (d + 1.0) * (2.0 * d + 1.0) / 6.0;
            const double bridge = std::max(0.0, sum_qq - 2.0 * slope * sum_dq + slope * slope * sum_dd);

            if (forward_row && scan.on_grid(e)) {
                const double den = head[s] + bridge;
                if (den > tol * (head_ref[s] + sum_qq)) {
                    const double num = P[s] - static_cast<double>(s) / static_cast<double>(e) * P[e];
                    const double r2 = num * num * static_cast<double>(e) / den;
                    if (r2 > best_f) {
                        best_f = r2;
                        out.forward_argpair = {s, e};
                    }
                }
            }
            if (backward_row && e + 1 < N && scan.on_grid(e + 1)) {
                const double den = bridge + tail[e];
                if (den > tol * (sum_qq + tail_ref[e])) {
                    const double num = (total - P[e]) - (static_cast<double>(N - e) / back_window) * backward_base;
                    const double r2 = num * num * back_window / den;
                    if (r2 > best_b) {
                        best_b = r2;
                        out.backward_argpair = {s + 1, e + 1};
                    }
                }
            }
        }
    }
    if (best_f < 0.0 || best_b < 0.0) {
        throw Error(ErrorCode::DegenerateSeries, "every scanned pair has a vanishing normalizer");
    }
    out.forward_max = std::sqrt(best_f);
    out.backward_max = std::sqrt(best_b);
    out.statistic = out.forward_max + out.backward_max;
    return out;
}

MultiScanResult multi_scan(std::span<const double> y, std::size_t stride) {
    return multi_scan(y, ScanSet(y.size(), stride));
}

TestOutcome test_multi(const PanelSeries& x, const SplitPlan& plan, double alpha, Projection mode,
                       const NullSample& null_gm, std::size_t stride) {
    detail::check_null_kind(null_gm, NullKind::GM);
    const ScanSet scan(plan.N, stride);
    auto run = [&](Projection projection, double level) {
        auto projected = detail::project_for(x, plan, projection);
        const auto result = multi_scan(projected.series.values(), scan);
        auto component = detail::calibrate(projection, result.statistic, level, null_gm);
        std::vector<std::size_t> locations{plan.m + result.forward_argpair.first,
                                           plan.m + result.backward_argpair.second - 1};
        std::sort(locations.begin(), locations.end());
        locations.erase(std::unique(locations.begin(), locations.end()), locations.end());
        component.locations = std::move(locations);
        component.sparse_index = projected.sparse_index;
        return component;
    };
    return detail::assemble(ScanKind::Multi, mode, alpha, plan, run);
}

TestOutcome test_multi(const PanelSeries& x, double epsilon, double eta, double alpha, Projection mode,
                       const NullSample& null_gm, std::size_t stride) {
    return test_multi(x, make_split_plan(x.n(), epsilon, eta), alpha, mode, null_gm, stride);
}

}  // namespace sssn
