#pragma once

// Glue shared by the single and multiple change-point panel tests:
// projection dispatch, calibration of one statistic, and the Bonferroni
// combination.

#include <optional>

#include "sssn/null_dist.hpp"
#include "sssn/outcome.hpp"
#include "sssn/panel.hpp"

namespace sssn::detail {

struct Projected {
    ProjectedSeries series;
    std::optional<std::size_t> sparse_index;
};

[[nodiscard]] Projected project_for(const PanelSeries& x, const SplitPlan& plan, Projection projection);

[[nodiscard]] ComponentResult calibrate(Projection projection, double statistic, double level,
                                        const NullSample& null);

void check_null_kind(const NullSample& null, NullKind expected);

/// Sets reject and locations from the components.
void finalize(TestOutcome& outcome);

/// `run(projection, level)` produces one calibrated component.
template <class Run>
TestOutcome assemble(ScanKind scan, Projection mode, double alpha, const SplitPlan& plan, Run&& run) {
    TestOutcome out;
    out.scan = scan;
    out.projection = mode;
    out.alpha = alpha;
    out.plan = plan;
    if (mode == Projection::Bonferroni) {
        out.components.push_back(run(Projection::Dense, alpha / 2));
        out.components.push_back(run(Projection::Sparse, alpha / 2));
    } else {
        out.components.push_back(run(mode, alpha));
    }
    finalize(out);
    return out;
}

}  // namespace sssn::detail
