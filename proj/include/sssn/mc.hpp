#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sssn/dgp.hpp"
#include "sssn/null_dist.hpp"
#include "sssn/outcome.hpp"

namespace sssn {

struct TestConfig {
    ScanKind scan = ScanKind::Single;
    Projection projection = Projection::Dense;
    double epsilon = kDefaultEpsilon;
    double eta = kDefaultEta;
    std::size_t stride = 1;  ///< multi only

    /// "dense", "multi-sparse", ...
    [[nodiscard]] std::string mode() const;
};

/// Accepts dense, sparse, bonferroni, multi (= multi-dense), multi-dense,
/// multi-sparse, multi-bonferroni.
[[nodiscard]] TestConfig parse_test_mode(std::string_view text);

struct McExperiment {
    DgpSpec dgp;                  ///< dgp.seed is ignored; replicate seeds derive from `seed`
    std::string shift = "none";   ///< preset name
    std::vector<double> c_grid;   ///< power only
    std::vector<TestConfig> tests;
    double alpha = 0.05;
    std::size_t replicates = 1000;
    bool size_adjust = false;
    std::uint64_t seed = 0;
    unsigned threads = 0;         ///< 0 = all cores; never changes results
};

struct NullTables {
    NullSample g = NullSample::published(NullKind::G);
    NullSample gm = NullSample::published(NullKind::GM);
};

struct McRow {
    std::string mode;
    double epsilon = 0.0;
    double eta = 0.0;
    double c = 0.0;
    double rate = 0.0;  ///< rejections / (replicates - degenerate)
    double se = 0.0;    ///< sqrt(rate (1 - rate) / (replicates - degenerate))
    std::size_t replicates = 0;
    std::size_t degenerate = 0;
};

struct McReport {
    McExperiment experiment;
    std::vector<McRow> rows;  ///< test-major, then c ascending
};

/// Throws InvalidArgument on an unusable experiment (R < 100, empty tests,
/// c-grid not strictly increasing and nonnegative).
void validate(const McExperiment& exp);

/// Rejection rates of every test on null panels of the experiment's DGP.
/// The shift must be "none" or the c-grid must be {0}.
[[nodiscard]] McReport run_size(const McExperiment& exp, const NullTables& nulls = {});

/// Rejection rates over the c-grid. The same replicate seeds are used at
/// every c, so curves are smooth in c. With size_adjust, the critical value
/// of each test is the empirical (1 - alpha) quantile of its score over a
/// c = 0 run with those seeds, and rejection means score > critical value.
[[nodiscard]] McReport run_power(const McExperiment& exp, const NullTables& nulls = {});

/// Header: mode,epsilon,eta,c,rate,se,replicates,degenerate_count
void write_report_csv(const McReport& report, std::ostream& out);

}  // namespace sssn
