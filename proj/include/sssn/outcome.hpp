#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sssn/panel.hpp"

namespace sssn {

enum class Projection { Dense, Sparse, Bonferroni };
enum class ScanKind { Single, Multi };

[[nodiscard]] std::string_view to_string(Projection projection) noexcept;
/// Accepts "dense", "sparse", "bonferroni".
[[nodiscard]] Projection parse_projection(std::string_view text);

/// How a reported p-value relates to the true one. Published calibration
/// tables only pin a handful of quantiles, so outside their range the
/// p-value is a bound rather than a number.
enum class Censoring {
    None,
    AtMost,   ///< true p-value <= value
    AtLeast,  ///< true p-value >= value
};

struct PValue {
    double value = 1.0;
    Censoring censoring = Censoring::None;

    /// Whether the p-value is known to be <= level.
    [[nodiscard]] bool at_most(double level) const noexcept {
        return censoring != Censoring::AtLeast && value <= level;
    }
};

/// One projected statistic inside an outcome: a single test has one, a
/// Bonferroni combination has two (dense, then sparse).
struct ComponentResult {
    Projection projection = Projection::Dense;
    double statistic = 0.0;
    PValue p_value;
    double threshold = 0.0;  ///< critical value at the level this component is tested at
    bool reject = false;
    std::vector<std::size_t> locations;       ///< original time indices, 1-based
    std::optional<std::size_t> sparse_index;  ///< selected coordinate for sparse projections
};

struct TestOutcome {
    ScanKind scan = ScanKind::Single;
    Projection projection = Projection::Dense;
    double alpha = 0.05;
    bool reject = false;
    std::vector<ComponentResult> components;
    std::vector<std::size_t> locations;  ///< from the component carrying the decision
    SplitPlan plan;

    /// "dense", "sparse", "bonferroni", "multi-dense", ...
    [[nodiscard]] std::string mode() const;
    /// The component with the smallest p-value.
    [[nodiscard]] const ComponentResult& lead() const;
    /// The lead p-value, times the number of components (Bonferroni),
    /// capped at 1.
    [[nodiscard]] PValue overall_p_value() const;
};

}  // namespace sssn
