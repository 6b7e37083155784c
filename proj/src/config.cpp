#include "sssn/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "sssn/error.hpp"

namespace sssn {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ConfigError, "field '" + field + "': " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

class Section {
public:
    Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
        if (!node_.IsMap()) fail(path_.empty() ? "<root>" : path_, "expected a mapping");
    }

    void allow(std::initializer_list<const char*> keys) const {
        const std::set<std::string> known(keys.begin(), keys.end());
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!known.contains(key)) fail(join(path_, key), "unknown field");
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return static_cast<bool>(find(key)); }

    [[nodiscard]] YAML::Node required(const std::string& key) const {
        auto n = find(key);
        if (!n) fail(join(path_, key), "missing required field");
        return n;
    }

    template <class T>
    [[nodiscard]] T get(const std::string& key) const {
        return convert<T>(required(key), join(path_, key));
    }

    template <class T>
    [[nodiscard]] T get(const std::string& key, T fallback) const {
        return has(key) ? get<T>(key) : fallback;
    }

    [[nodiscard]] Section section(const std::string& key) const { return {required(key), join(path_, key)}; }
    [[nodiscard]] const std::string& path() const { return path_; }

    template <class T>
    static T convert(const YAML::Node& n, const std::string& field) {
        if (!n.IsScalar()) fail(field, "expected a scalar");
        try {
            return n.as<T>();
        } catch (const YAML::Exception&) {
            fail(field, "cannot convert '" + n.Scalar() + "'");
        }
    }

private:
    // Linear lookup so that keys such as `null`, which YAML reads as a null
    // node rather than a string, still match.
    [[nodiscard]] YAML::Node find(const std::string& key) const {
        for (const auto& kv : node_) {
            if (kv.first.as<std::string>() == key) return kv.second;
        }
        return YAML::Node(YAML::NodeType::Undefined);
    }

    YAML::Node node_;
    std::string path_;
};

template <class Parse>
auto wrap(const std::string& field, const std::string& text, Parse&& parse) {
    try {
        return parse(text);
    } catch (const Error& e) {
        fail(field, e.what());
    }
}

CovSpec parse_cov(const Section& s, std::size_t p) {
    s.allow({"kind", "rho"});
    CovSpec cov;
    cov.p = p;
    cov.kind = wrap(join(s.path(), "kind"), s.get<std::string>("kind"), parse_cov_kind);
    if (cov.kind == CovKind::AR) cov.rho = s.get<double>("rho");
    return cov;
}

DgpSpec parse_dgp_section(const Section& s) {
    s.allow({"family", "n", "p", "kappa", "cov", "linear", "factor"});
    DgpSpec dgp;
    dgp.family = wrap(join(s.path(), "family"), s.get<std::string>("family", "var1"), parse_dgp_family);
    dgp.n = s.get<std::size_t>("n");
    dgp.p = s.get<std::size_t>("p");
    dgp.kappa = s.get<double>("kappa", 0.0);
    if (s.has("cov")) {
        dgp.cov = parse_cov(s.section("cov"), dgp.p);
    } else {
        dgp.cov = CovSpec{CovKind::ID, dgp.p, 0.0};
    }
    if (s.has("linear")) {
        const auto l = s.section("linear");
        l.allow({"theta", "beta"});
        dgp.linear.theta = l.get<double>("theta", dgp.linear.theta);
        dgp.linear.beta = l.get<double>("beta", dgp.linear.beta);
    }
    if (s.has("factor")) {
        const auto f = s.section("factor");
        f.allow({"count", "loading_scale", "ar"});
        dgp.factor.count = f.get<std::size_t>("count", dgp.factor.count);
        dgp.factor.loading_scale = f.get<double>("loading_scale", dgp.factor.loading_scale);
        dgp.factor.ar = f.get<double>("ar", dgp.factor.ar);
    }
    try {
        validate(dgp);
    } catch (const Error& e) {
        fail(s.path(), e.what());
    }
    return dgp;
}

YAML::Node load_yaml(std::string_view text) {
    try {
        return YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::ConfigError, std::string("malformed YAML: ") + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

ExperimentConfig parse_experiment(std::string_view yaml, const std::filesystem::path& base_dir) {
    const Section root(load_yaml(yaml), "");
    root.allow({"seed", "alpha", "replicates", "size_adjust", "threads", "dgp", "shift", "tests", "null"});
    ExperimentConfig config;
    auto& exp = config.experiment;
    exp.seed = root.get<std::uint64_t>("seed");
    exp.alpha = root.get<double>("alpha");
    if (!(exp.alpha > 0.0) || !(exp.alpha <= 1.0)) fail("alpha", "must lie in (0, 1]");
    exp.replicates = root.get<std::size_t>("replicates");
    if (exp.replicates < 100) fail("replicates", "must be >= 100");
    exp.size_adjust = root.get<bool>("size_adjust", false);
    exp.threads = root.get<unsigned>("threads", 0u);
    exp.dgp = parse_dgp_section(root.section("dgp"));

    if (root.has("shift")) {
        const auto s = root.section("shift");
        s.allow({"preset", "c"});
        exp.shift = s.get<std::string>("preset");
        if (s.has("c")) {
            const auto c = s.required("c");
            if (c.IsScalar()) {
                exp.c_grid = {Section::convert<double>(c, "shift.c")};
            } else if (c.IsSequence()) {
                for (std::size_t i = 0; i < c.size(); ++i) {
                    exp.c_grid.push_back(Section::convert<double>(c[i], "shift.c[" + std::to_string(i) + "]"));
                }
            } else {
                fail("shift.c", "expected a number or a list");
            }
        }
        try {
            (void)preset_shift(exp.shift, 0.0, exp.dgp.n, exp.dgp.p);
        } catch (const Error& e) {
            fail("shift.preset", e.what());
        }
    }

    const auto tests = root.required("tests");
    if (!tests.IsSequence() || tests.size() == 0) fail("tests", "expected a non-empty list");
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const Section t(tests[i], "tests[" + std::to_string(i) + "]");
        t.allow({"mode", "epsilon", "eta", "stride"});
        TestConfig test = wrap(join(t.path(), "mode"), t.get<std::string>("mode"), parse_test_mode);
        test.epsilon = t.get<double>("epsilon", kDefaultEpsilon);
        test.eta = t.get<double>("eta", kDefaultEta);
        test.stride = t.get<std::size_t>("stride", 1);
        try {
            (void)make_split_plan(exp.dgp.n, test.epsilon, test.eta);
        } catch (const Error& e) {
            fail(t.path(), e.what());
        }
        if (test.stride == 0) fail(join(t.path(), "stride"), "must be positive");
        exp.tests.push_back(test);
    }

    if (root.has("null")) {
        const auto s = root.section("null");
        s.allow({"G", "GM"});
        auto resolve = [&](const std::string& value) {
            if (value == "builtin") return value;
            const std::filesystem::path p(value);
            return (p.is_relative() && !base_dir.empty() ? base_dir / p : p).string();
        };
        config.null_g = resolve(s.get<std::string>("G", "builtin"));
        config.null_gm = resolve(s.get<std::string>("GM", "builtin"));
    }
    try {
        validate(exp);
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, e.what());
    }
    return config;
}

ExperimentConfig load_experiment(const std::filesystem::path& path) {
    return parse_experiment(read_file(path), path.parent_path());
}

DgpSpec parse_dgp(std::string_view yaml) {
    const YAML::Node root = load_yaml(yaml);
    if (root.IsMap() && root["dgp"]) return parse_dgp_section(Section(root["dgp"], "dgp"));
    return parse_dgp_section(Section(root, ""));
}

DgpSpec load_dgp(const std::filesystem::path& path) {
    return parse_dgp(read_file(path));
}

NullSample resolve_null(std::string_view source, NullKind kind) {
    if (source == "builtin") return NullSample::published(kind);
    auto null = load_null(std::filesystem::path(source));
    if (null.kind() != kind) {
        throw Error(ErrorCode::FormatError, "'" + std::string(source) + "' holds a " +
                                                std::string(to_string(null.kind())) + " sample, expected " +
                                                std::string(to_string(kind)));
    }
    return null;
}

NullTables resolve_nulls(const ExperimentConfig& config) {
    return {resolve_null(config.null_g, NullKind::G), resolve_null(config.null_gm, NullKind::GM)};
}

}  // namespace sssn
