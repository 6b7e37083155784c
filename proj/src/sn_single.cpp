#include "sssn/sn_single.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "combine.hpp"
#include "cusum.hpp"
#include "sssn/error.hpp"

namespace sssn {

SnScanResult sn_statistic(std::span<const double> y, bool keep_per_k) {
    const std::size_t N = y.size();
    if (N < 4) {
        throw Error(ErrorCode::InsufficientSample, "series length " + std::to_string(N) + " < 4");
    }
    const detail::CusumTable table(y);

    SnScanResult out;
    if (keep_per_k) out.per_k.assign(N - 1, std::numeric_limits<double>::quiet_NaN());

    const long double total = table.partial(N);
    const long double root_n = std::sqrt(static_cast<long double>(N));
    bool found = false;
    long double best = 0;
    if (!table.constant()) {
        for (std::size_t k = 1; k < N; ++k) {
            const auto left = table.bridge(0, k);
            const auto right = table.bridge(k, N);
            if (detail::is_zero(left, right)) continue;
            const long double cusum = table.partial(k) - static_cast<long double>(k) * total / N;
            const long double ratio = root_n * cusum / std::sqrt(left.value + right.value);
            if (keep_per_k) out.per_k[k - 1] = static_cast<double>(ratio);
            if (!found || ratio > best) {
                best = ratio;
                out.argmax_k = k;
                found = true;
            }
        }
    }
    if (!found) {
        throw Error(ErrorCode::DegenerateSeries, "self-normalizer vanishes for every k");
    }
    out.statistic = static_cast<double>(best);
    return out;
}

std::size_t estimate_location(const SnScanResult& scan, const SplitPlan& plan) noexcept {
    return plan.m + scan.argmax_k;
}

TestOutcome sn_univariate_test(std::span<const double> y, double alpha, const NullSample& null) {
    const auto scan = sn_statistic(y);
    TestOutcome out;
    out.scan = ScanKind::Single;
    out.projection = Projection::Dense;
    out.alpha = alpha;
    out.plan.n = y.size();
    out.plan.N = y.size();
    auto component = detail::calibrate(Projection::Dense, scan.statistic, alpha, null);
    component.locations = {scan.argmax_k};
    out.components.push_back(std::move(component));
    detail::finalize(out);
    return out;
}

TestOutcome test_single(const PanelSeries& x, const SplitPlan& plan, double alpha, Projection mode,
                        const NullSample& null) {
    detail::check_null_kind(null, NullKind::G);
    auto run = [&](Projection projection, double level) {
        auto projected = detail::project_for(x, plan, projection);
        const auto scan = sn_statistic(projected.series.values());
        auto component = detail::calibrate(projection, scan.statistic, level, null);
        component.locations = {estimate_location(scan, plan)};
        component.sparse_index = projected.sparse_index;
        return component;
    };
    return detail::assemble(ScanKind::Single, mode, alpha, plan, run);
}

TestOutcome test_single(const PanelSeries& x, double epsilon, double eta, double alpha, Projection mode,
                        const NullSample& null) {
    return test_single(x, make_split_plan(x.n(), epsilon, eta), alpha, mode, null);
}

}  // namespace sssn
