#include "sssn/outcome.hpp"

#include <algorithm>
#include <string>

#include "combine.hpp"
#include "sssn/error.hpp"

namespace sssn {

std::string_view to_string(Projection projection) noexcept {
    switch (projection) {
        case Projection::Dense: return "dense";
        case Projection::Sparse: return "sparse";
        case Projection::Bonferroni: return "bonferroni";
    }
    return "dense";
}

Projection parse_projection(std::string_view text) {
    if (text == "dense") return Projection::Dense;
    if (text == "sparse") return Projection::Sparse;
    if (text == "bonferroni") return Projection::Bonferroni;
    throw Error(ErrorCode::InvalidArgument, "unknown projection '" + std::string(text) + "'");
}

std::string TestOutcome::mode() const {
    std::string name(to_string(projection));
    return scan == ScanKind::Multi ? "multi-" + name : name;
}

const ComponentResult& TestOutcome::lead() const {
    if (components.empty()) {
        throw Error(ErrorCode::InvalidArgument, "outcome has no components");
    }
    const ComponentResult* best = &components.front();
    for (const auto& c : components) {
        if (c.p_value.value < best->p_value.value) best = &c;
    }
    return *best;
}

PValue TestOutcome::overall_p_value() const {
    PValue p = lead().p_value;
    p.value = std::min(1.0, p.value * static_cast<double>(components.size()));
    return p;
}

namespace detail {

Projected project_for(const PanelSeries& x, const SplitPlan& plan, Projection projection) {
    if (projection == Projection::Sparse) {
        auto sparse = sparse_direction(x, plan);
        return {project(x, sparse.direction, plan), sparse.index};
    }
    return {project(x, dense_direction(x, plan), plan), std::nullopt};
}

ComponentResult calibrate(Projection projection, double statistic, double level, const NullSample& null) {
    if (!(level > 0.0) || !(level <= 1.0)) {
        throw Error(ErrorCode::UnsupportedLevel, "level must lie in (0, 1], got " + std::to_string(level));
    }
    ComponentResult c;
    c.projection = projection;
    c.statistic = statistic;
    c.p_value = null.p_value(statistic);
    c.threshold = null.threshold(level);
    c.reject = null.rejects(statistic, level);
    return c;
}

void check_null_kind(const NullSample& null, NullKind expected) {
    if (null.kind() != expected) {
        throw Error(ErrorCode::InvalidArgument, "null sample is of kind " + std::string(to_string(null.kind())) +
                                                    ", expected " + std::string(to_string(expected)));
    }
}

void finalize(TestOutcome& outcome) {
    outcome.reject = false;
    for (const auto& c : outcome.components) outcome.reject = outcome.reject || c.reject;
    outcome.locations = outcome.components.empty() ? std::vector<std::size_t>{} : outcome.lead().locations;
}

}  // namespace detail
}  // namespace sssn
