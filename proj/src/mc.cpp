#include "sssn/mc.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "sssn/csv.hpp"
#include "sssn/error.hpp"
#include "sssn/parallel.hpp"
#include "sssn/sn_multi.hpp"
#include "sssn/sn_single.hpp"

namespace sssn {

std::string TestConfig::mode() const {
    std::string name(to_string(projection));
    return scan == ScanKind::Multi ? "multi-" + name : name;
}

TestConfig parse_test_mode(std::string_view text) {
    TestConfig t;
    if (text == "multi") {
        t.scan = ScanKind::Multi;
        return t;
    }
    if (text.starts_with("multi-")) {
        t.scan = ScanKind::Multi;
        text.remove_prefix(6);
    }
    t.projection = parse_projection(text);
    return t;
}

void validate(const McExperiment& exp) {
    validate(exp.dgp);
    if (exp.replicates < 100) {
        throw Error(ErrorCode::InvalidArgument, "replicates must be >= 100");
    }
    if (exp.tests.empty()) {
        throw Error(ErrorCode::InvalidArgument, "experiment lists no tests");
    }
    if (!(exp.alpha > 0.0) || !(exp.alpha <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
    }
    for (std::size_t i = 0; i < exp.c_grid.size(); ++i) {
        const double c = exp.c_grid[i];
        if (!(c >= 0.0) || !std::isfinite(c) || (i > 0 && !(c > exp.c_grid[i - 1]))) {
            throw Error(ErrorCode::InvalidArgument, "c-grid must be nonnegative and strictly increasing");
        }
    }
    for (const auto& t : exp.tests) {
        (void)make_split_plan(exp.dgp.n, t.epsilon, t.eta);
        if (t.stride == 0) throw Error(ErrorCode::InvalidArgument, "stride must be positive");
    }
}

namespace {

constexpr std::uint64_t kStreamReplicate = 0x6d63;

enum class Verdict : unsigned char { Accept, Reject, Degenerate };

struct Cell {
    double score = 0.0;
    Verdict verdict = Verdict::Degenerate;
};

struct PreparedTest {
    TestConfig config;
    SplitPlan plan;
};

Cell run_one(const PanelSeries& x, const PreparedTest& test, double alpha, const NullTables& nulls) {
    try {
        const TestOutcome outcome =
            test.config.scan == ScanKind::Single
                ? test_single(x, test.plan, alpha, test.config.projection, nulls.g)
                : test_multi(x, test.plan, alpha, test.config.projection, nulls.gm, test.config.stride);
        // Both Bonferroni components share one null law, so the larger
        // statistic is the one with the smaller p-value.
        double score = outcome.components.front().statistic;
        for (const auto& c : outcome.components) score = std::max(score, c.statistic);
        return {score, outcome.reject ? Verdict::Reject : Verdict::Accept};
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateSeries) throw;
        return {};
    }
}

McRow summarize(const PreparedTest& test, double c, std::size_t replicates, std::size_t rejections,
                std::size_t degenerate) {
    McRow row;
    row.mode = test.config.mode();
    row.epsilon = test.config.epsilon;
    row.eta = test.config.eta;
    row.c = c;
    row.replicates = replicates;
    row.degenerate = degenerate;
    const std::size_t effective = replicates - degenerate;
    if (effective > 0) {
        row.rate = static_cast<double>(rejections) / static_cast<double>(effective);
        row.se = std::sqrt(row.rate * (1.0 - row.rate) / static_cast<double>(effective));
    }
    return row;
}

// results[(r * levels + ci) * tests + ti]
std::vector<Cell> simulate(const McExperiment& exp, const std::vector<double>& levels,
                           const std::vector<PreparedTest>& tests, const NullTables& nulls) {
    const std::size_t n = exp.dgp.n;
    const std::size_t p = exp.dgp.p;
    std::vector<Eigen::MatrixXd> means;
    means.reserve(levels.size());
    for (double c : levels) means.push_back(mean_path(preset_shift(exp.shift, c, n, p), n, p));

    std::vector<Cell> results(exp.replicates * levels.size() * tests.size());
    parallel_for(exp.replicates, exp.threads, [&](std::size_t r) {
        DgpSpec dgp = exp.dgp;
        dgp.seed = derive_seed(exp.seed, kStreamReplicate, r);
        const PanelSeries noise = gen_panel(dgp);
        for (std::size_t ci = 0; ci < levels.size(); ++ci) {
            const PanelSeries x(noise.data() + means[ci]);
            for (std::size_t ti = 0; ti < tests.size(); ++ti) {
                results[(r * levels.size() + ci) * tests.size() + ti] = run_one(x, tests[ti], exp.alpha, nulls);
            }
        }
    });
    return results;
}

std::vector<PreparedTest> prepare(const McExperiment& exp) {
    validate(exp);
    std::vector<PreparedTest> tests;
    for (const auto& t : exp.tests) tests.push_back({t, make_split_plan(exp.dgp.n, t.epsilon, t.eta)});
    return tests;
}

}  // namespace

McReport run_size(const McExperiment& exp, const NullTables& nulls) {
    const bool null_grid = exp.c_grid.empty() || (exp.c_grid.size() == 1 && exp.c_grid[0] == 0.0);
    if (exp.shift != "none" && !null_grid) {
        throw Error(ErrorCode::InvalidArgument, "size experiments take no shift");
    }
    const auto tests = prepare(exp);
    const std::vector<double> levels{0.0};
    const auto results = simulate(exp, levels, tests, nulls);

    McReport report{exp, {}};
    for (std::size_t ti = 0; ti < tests.size(); ++ti) {
        std::size_t rejections = 0, degenerate = 0;
        for (std::size_t r = 0; r < exp.replicates; ++r) {
            const auto v = results[r * tests.size() + ti].verdict;
            rejections += v == Verdict::Reject;
            degenerate += v == Verdict::Degenerate;
        }
        report.rows.push_back(summarize(tests[ti], 0.0, exp.replicates, rejections, degenerate));
    }
    return report;
}

McReport run_power(const McExperiment& exp, const NullTables& nulls) {
    if (exp.c_grid.empty()) {
        throw Error(ErrorCode::InvalidArgument, "power experiments need a c-grid");
    }
    if (exp.shift == "none") {
        throw Error(ErrorCode::InvalidArgument, "power experiments need a shift preset");
    }
    const auto tests = prepare(exp);

    // Level 0 is always simulated; it is the calibration run when size
    // adjusting and is reported only if it belongs to the grid.
    std::vector<double> levels = exp.c_grid;
    const bool grid_has_zero = levels.front() == 0.0;
    if (!grid_has_zero) levels.insert(levels.begin(), 0.0);
    const auto results = simulate(exp, levels, tests, nulls);
    auto cell = [&](std::size_t r, std::size_t ci, std::size_t ti) -> const Cell& {
        return results[(r * levels.size() + ci) * tests.size() + ti];
    };

    McReport report{exp, {}};
    for (std::size_t ti = 0; ti < tests.size(); ++ti) {
        double critical = 0.0;
        if (exp.size_adjust) {
            std::vector<double> scores;
            for (std::size_t r = 0; r < exp.replicates; ++r) {
                if (cell(r, 0, ti).verdict != Verdict::Degenerate) scores.push_back(cell(r, 0, ti).score);
            }
            if (scores.empty()) {
                throw Error(ErrorCode::DegenerateSeries, "every calibration replicate is degenerate");
            }
            std::sort(scores.begin(), scores.end());
            const auto R = static_cast<double>(scores.size());
            const double rank = std::ceil((1.0 - exp.alpha) * R - 1e-9);
            critical = scores[static_cast<std::size_t>(std::clamp(rank - 1.0, 0.0, R - 1.0))];
        }
        for (std::size_t ci = grid_has_zero ? 0 : 1; ci < levels.size(); ++ci) {
            std::size_t rejections = 0, degenerate = 0;
            for (std::size_t r = 0; r < exp.replicates; ++r) {
                const Cell& x = cell(r, ci, ti);
                if (x.verdict == Verdict::Degenerate) {
                    ++degenerate;
                } else if (exp.size_adjust ? x.score > critical : x.verdict == Verdict::Reject) {
                    ++rejections;
                }
            }
            report.rows.push_back(summarize(tests[ti], levels[ci], exp.replicates, rejections, degenerate));
        }
    }
    return report;
}

void write_report_csv(const McReport& report, std::ostream& out) {
    out << "mode,epsilon,eta,c,rate,se,replicates,degenerate_count\n";
    for (const auto& row : report.rows) {
        out << row.mode << ',' << format_number(row.epsilon) << ',' << format_number(row.eta) << ','
            << format_number(row.c) << ',' << format_number(row.rate) << ',' << format_number(row.se) << ','
            << row.replicates << ',' << row.degenerate << '\n';
    }
}

}  // namespace sssn
