// Command-line front end: test, simulate-null, mc-size, mc-power, gen.
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sssn/config.hpp"
#include "sssn/csv.hpp"
#include "sssn/dgp.hpp"
#include "sssn/error.hpp"
#include "sssn/mc.hpp"
#include "sssn/null_dist.hpp"
#include "sssn/parallel.hpp"
#include "sssn/sn_multi.hpp"
#include "sssn/sn_single.hpp"

#ifndef SSSN_VERSION
#define SSSN_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace sssn;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitStatistical = 2;
constexpr int kExitRejected = 3;

std::string_view censoring_name(Censoring c) {
    switch (c) {
        case Censoring::None: return "none";
        case Censoring::AtMost: return "at_most";
        case Censoring::AtLeast: return "at_least";
    }
    return "none";
}

std::string p_value_text(const PValue& p) {
    const std::string v = format_number(p.value);
    switch (p.censoring) {
        case Censoring::AtMost: return "<= " + v;
        case Censoring::AtLeast: return ">= " + v;
        case Censoring::None: break;
    }
    return v;
}

std::string null_label(const NullSample& null) {
    return null.source() == NullSource::Published ? "published table" : "simulated sample";
}

json outcome_json(const TestOutcome& outcome, const NullSample& null) {
    const auto& lead = outcome.lead();
    const auto p = outcome.overall_p_value();
    json components = json::array();
    for (const auto& c : outcome.components) {
        json item{{"projection", to_string(c.projection)},
                  {"statistic", c.statistic},
                  {"p_value", c.p_value.value},
                  {"p_value_censoring", censoring_name(c.p_value.censoring)},
                  {"threshold", c.threshold},
                  {"reject", c.reject},
                  {"location", c.locations}};
        if (c.sparse_index) item["sparse_index"] = *c.sparse_index;
        components.push_back(std::move(item));
    }
    const auto& plan = outcome.plan;
    return json{
        {"mode", outcome.mode()},
        {"statistic", lead.statistic},
        {"p_value", p.value},
        {"threshold", lead.threshold},
        {"alpha", outcome.alpha},
        {"reject", outcome.reject},
        {"location", outcome.locations},
        {"meta",
         {{"n", plan.n},
          {"epsilon", plan.epsilon},
          {"eta", plan.eta},
          {"m", plan.m},
          {"m1", plan.m1},
          {"m2", plan.m2},
          {"N", plan.N},
          {"p_value_censoring", censoring_name(p.censoring)},
          {"null_kind", to_string(null.kind())},
          {"null_source", null.source() == NullSource::Published ? "published" : "simulated"},
          {"components", components},
          {"version", SSSN_VERSION}}},
    };
}

void print_text(const TestOutcome& outcome, const NullSample& null, std::ostream& out) {
    out << "mode:       " << outcome.mode() << '\n';
    out << "split:      n=" << outcome.plan.n << " m=" << outcome.plan.m << " m1=" << outcome.plan.m1
        << " m2=" << outcome.plan.m2 << " N=" << outcome.plan.N << '\n';
    for (const auto& c : outcome.components) {
        if (outcome.components.size() > 1) out << "[" << to_string(c.projection) << "]\n";
        out << "statistic:  " << format_number(c.statistic) << '\n';
        out << "p-value:    " << p_value_text(c.p_value) << '\n';
        out << "threshold:  " << format_number(c.threshold) << '\n';
        if (c.sparse_index) out << "coordinate: " << *c.sparse_index << '\n';
    }
    if (outcome.components.size() > 1) {
        out << "combined p-value: " << p_value_text(outcome.overall_p_value()) << '\n';
    }
    out << "alpha:      " << format_number(outcome.alpha) << " (" << null_label(null) << ")\n";
    out << "decision:   " << (outcome.reject ? "reject" : "fail to reject") << '\n';
    out << "location:  ";
    for (auto t : outcome.locations) out << ' ' << t;
    out << '\n';
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    return out;
}

json experiment_json(const ExperimentConfig& config) {
    const auto& e = config.experiment;
    json tests = json::array();
    for (const auto& t : e.tests) {
        tests.push_back({{"mode", t.mode()}, {"epsilon", t.epsilon}, {"eta", t.eta}, {"stride", t.stride}});
    }
    const auto& d = e.dgp;
    return json{{"seed", e.seed},
                {"alpha", e.alpha},
                {"replicates", e.replicates},
                {"size_adjust", e.size_adjust},
                {"shift", e.shift},
                {"c_grid", e.c_grid},
                {"tests", tests},
                {"dgp",
                 {{"family", to_string(d.family)},
                  {"n", d.n},
                  {"p", d.p},
                  {"kappa", d.kappa},
                  {"cov", {{"kind", to_string(d.cov.kind)}, {"rho", d.cov.rho}}},
                  {"linear", {{"theta", d.linear.theta}, {"beta", d.linear.beta}}},
                  {"factor",
                   {{"count", d.factor.count}, {"loading_scale", d.factor.loading_scale}, {"ar", d.factor.ar}}}}},
                {"null", {{"G", config.null_g}, {"GM", config.null_gm}}}};
}

int run_mc(const std::string& config_path, const std::string& out_path, std::optional<unsigned> threads,
           bool power) {
    auto config = load_experiment(config_path);
    if (threads) config.experiment.threads = *threads;
    const auto nulls = resolve_nulls(config);
    const auto start = std::chrono::steady_clock::now();
    const McReport report = power ? run_power(config.experiment, nulls) : run_size(config.experiment, nulls);
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

    auto out = open_out(out_path);
    write_report_csv(report, out);
    out.close();
    json meta{{"command", power ? "mc-power" : "mc-size"},
              {"config", config_path},
              {"experiment", experiment_json(config)},
              {"threads", static_cast<unsigned>(resolve_threads(config.experiment.threads))},
              {"wall_time_seconds", wall.count()},
              {"version", SSSN_VERSION},
              {"compiler", __VERSION__}};
    auto sidecar = open_out(out_path + ".meta.json");
    sidecar << meta.dump(2) << '\n';

    for (const auto& row : report.rows) {
        std::cout << row.mode << " c=" << format_number(row.c) << " rate=" << format_number(row.rate)
                  << " se=" << format_number(row.se) << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sample-splitting self-normalized change-point tests"};
    app.set_version_flag("--version", SSSN_VERSION);
    app.require_subcommand(1, 1);

    // test
    auto* test = app.add_subcommand("test", "Test a CSV panel for mean change points");
    std::string input;
    std::string mode = "dense";
    double epsilon = kDefaultEpsilon;
    double eta = kDefaultEta;
    double alpha = 0.05;
    std::string null_source = "builtin";
    std::size_t stride = 1;
    bool as_json = false;
    bool as_text = false;
    bool fail_on_reject = false;
    test->add_option("input", input, "CSV file, rows = time, columns = components")->required();
    test->add_option("--mode", mode, "dense|sparse|bonferroni|multi|multi-sparse|multi-bonferroni")
        ->capture_default_str();
    test->add_option("--epsilon", epsilon, "splitting fraction")->capture_default_str();
    test->add_option("--eta", eta, "trimming fraction")->capture_default_str();
    test->add_option("--alpha", alpha, "test level")->capture_default_str();
    test->add_option("--null", null_source, "'builtin' or a null-sample file")->capture_default_str();
    test->add_option("--stride", stride, "scan stride for multi modes")->capture_default_str();
    auto* json_flag = test->add_flag("--json", as_json, "JSON output");
    test->add_flag("--text", as_text, "plain text output (default)")->excludes(json_flag);
    test->add_flag("--fail-on-reject", fail_on_reject, "exit with status 3 on rejection");

    // simulate-null
    auto* sim = app.add_subcommand("simulate-null", "Simulate the null law of G or GM");
    std::string kind_text = "G";
    std::size_t grid = 5000;
    std::size_t replicates = 50000;
    std::size_t sim_stride = 1;
    std::uint64_t seed = 0;
    std::string out_path;
    unsigned threads = 0;
    sim->add_option("--kind", kind_text, "G or GM")->capture_default_str();
    sim->add_option("--grid", grid, "series length M")->capture_default_str();
    sim->add_option("--replicates", replicates, "number of replicates R")->capture_default_str();
    sim->add_option("--stride", sim_stride, "scan stride (GM)")->capture_default_str();
    sim->add_option("--seed", seed, "random seed")->required();
    sim->add_option("--out", out_path, "output null-sample file")->required();
    sim->add_option("--threads", threads, "worker threads, 0 = all cores")->capture_default_str();

    // mc-size / mc-power
    std::string config_path;
    std::optional<unsigned> mc_threads;
    auto* mc_size = app.add_subcommand("mc-size", "Empirical size experiment");
    auto* mc_power = app.add_subcommand("mc-power", "Power curve experiment");
    for (auto* cmd : {mc_size, mc_power}) {
        cmd->add_option("--config", config_path, "YAML experiment config")->required();
        cmd->add_option("--out", out_path, "output CSV (a .meta.json sidecar is written next to it)")->required();
        cmd->add_option("--threads", mc_threads, "worker threads, overrides the config");
    }

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic panel");
    std::string dgp_path;
    std::string preset = "none";
    double c = 0.0;
    bool header = false;
    gen->add_option("--dgp", dgp_path, "YAML dgp config")->required();
    gen->add_option("--shift", preset, "none|dense_mid|sparse_mid|DD|SS|DS|DDD")->capture_default_str();
    gen->add_option("--c", c, "shift size")->capture_default_str();
    gen->add_option("--seed", seed, "random seed")->required();
    gen->add_option("--out", out_path, "output CSV")->required();
    gen->add_flag("--header", header, "write a header row");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (test->parsed()) {
            const PanelSeries x = read_panel_csv(std::filesystem::path(input));
            const TestConfig config = parse_test_mode(mode);
            const NullKind kind = config.scan == ScanKind::Single ? NullKind::G : NullKind::GM;
            const NullSample null = resolve_null(null_source, kind);
            const TestOutcome outcome =
                config.scan == ScanKind::Single
                    ? test_single(x, epsilon, eta, alpha, config.projection, null)
                    : test_multi(x, epsilon, eta, alpha, config.projection, null, stride);
            if (as_json) {
                std::cout << outcome_json(outcome, null).dump(2) << '\n';
            } else {
                print_text(outcome, null, std::cout);
            }
            return outcome.reject && fail_on_reject ? kExitRejected : kExitOk;
        }
        if (sim->parsed()) {
            const NullKind kind = parse_null_kind(kind_text);
            const NullSample null = kind == NullKind::G ? simulate_G(grid, replicates, seed, threads)
                                                        : simulate_GM(grid, replicates, sim_stride, seed, threads);
            save_null(null, out_path);
            const auto& q = null.standard_quantiles();
            for (std::size_t i = 0; i < q.size(); ++i) {
                std::cout << format_number(kStandardLevels[i]) << ' ' << format_number(q[i]) << '\n';
            }
            return kExitOk;
        }
        if (mc_size->parsed() || mc_power->parsed()) {
            return run_mc(config_path, out_path, mc_threads, mc_power->parsed());
        }
        if (gen->parsed()) {
            DgpSpec dgp = load_dgp(dgp_path);
            dgp.seed = seed;
            write_panel_csv(gen_panel(dgp, preset_shift(preset, c, dgp.n, dgp.p)), std::filesystem::path(out_path),
                            header);
            return kExitOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_statistical(e.code()) ? kExitStatistical : kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
