#include "sssn/null_dist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include <boost/random/normal_distribution.hpp>

#include "sssn/error.hpp"
#include "sssn/parallel.hpp"
#include "sssn/sn_multi.hpp"
#include "sssn/sn_single.hpp"

namespace sssn {

std::string_view to_string(NullKind kind) noexcept {
    return kind == NullKind::G ? "G" : "GM";
}

NullKind parse_null_kind(std::string_view text) {
    if (text == "G") return NullKind::G;
    if (text == "GM") return NullKind::GM;
    throw Error(ErrorCode::InvalidArgument, "unknown null kind '" + std::string(text) + "' (expected G or GM)");
}

namespace {

constexpr double kLevelSnap = 1e-12;

const std::array<double, 6>& published_values(NullKind kind) {
    return kind == NullKind::G ? kPublishedG : kPublishedGM;
}

// Piecewise-linear map from level to critical value through the anchors.
double interpolate_table(const std::array<double, 6>& values, double level) {
    const auto& levels = kStandardLevels;
    if (level < levels.front() - kLevelSnap || level > levels.back() + kLevelSnap) {
        throw Error(ErrorCode::UnsupportedLevel,
                    "published table covers quantile levels 0.90..0.999 only, got " + std::to_string(level));
    }
    level = std::clamp(level, levels.front(), levels.back());
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        if (level <= levels[i + 1] + kLevelSnap) {
            if (std::abs(level - levels[i + 1]) <= kLevelSnap) return values[i + 1];
            if (std::abs(level - levels[i]) <= kLevelSnap) return values[i];
            const double w = (level - levels[i]) / (levels[i + 1] - levels[i]);
            return values[i] + w * (values[i + 1] - values[i]);
        }
    }
    return values.back();
}

}  // namespace

NullSample NullSample::published(NullKind kind) {
    NullSample out;
    out.kind_ = kind;
    out.source_ = NullSource::Published;
    out.standard_ = published_values(kind);
    return out;
}

NullSample NullSample::simulated(NullKind kind, std::vector<double> sorted, SimulationMeta meta) {
    if (sorted.empty()) {
        throw Error(ErrorCode::FormatError, "empty null sample");
    }
    if (meta.replicates != sorted.size()) {
        throw Error(ErrorCode::FormatError, "metadata says " + std::to_string(meta.replicates) +
                                                " replicates, sample has " + std::to_string(sorted.size()));
    }
    if (!std::all_of(sorted.begin(), sorted.end(), [](double v) { return std::isfinite(v); })) {
        throw Error(ErrorCode::FormatError, "null sample contains non-finite values");
    }
    if (!std::is_sorted(sorted.begin(), sorted.end())) {
        throw Error(ErrorCode::FormatError, "null sample is not sorted ascending");
    }
    NullSample out;
    out.kind_ = kind;
    out.source_ = NullSource::Simulated;
    out.meta_ = meta;
    out.sample_ = std::move(sorted);
    for (std::size_t i = 0; i < kStandardLevels.size(); ++i) {
        out.standard_[i] = out.quantile(kStandardLevels[i]);
    }
    return out;
}

double NullSample::quantile(double q) const {
    if (!(q > 0.0) || !(q < 1.0)) {
        throw Error(ErrorCode::UnsupportedLevel, "quantile level must lie in (0, 1), got " + std::to_string(q));
    }
    if (source_ == NullSource::Published) {
        return interpolate_table(standard_, q);
    }
    const auto R = static_cast<double>(sample_.size());
    // ceil(qR) - 1 on a 0-based sample; the nudge absorbs representation
    // error in q (0.95 * 50000 must index 47499, not 47500).
    const double rank = std::ceil(q * R - 1e-9);
    const auto index = static_cast<std::size_t>(std::clamp(rank - 1.0, 0.0, R - 1.0));
    return sample_[index];
}

PValue NullSample::p_value(double statistic) const {
    if (source_ == NullSource::Published) {
        const auto& tails = kStandardTails;
        if (statistic >= standard_.back()) return {tails.back(), Censoring::AtMost};
        if (statistic < standard_.front()) return {tails.front(), Censoring::AtLeast};
        for (std::size_t i = 0; i + 1 < tails.size(); ++i) {
            if (statistic < standard_[i + 1]) {
                const double w = (statistic - standard_[i]) / (standard_[i + 1] - standard_[i]);
                return {tails[i] + w * (tails[i + 1] - tails[i]), Censoring::None};
            }
        }
        return {tails.back(), Censoring::AtMost};
    }
    const auto first = std::lower_bound(sample_.begin(), sample_.end(), statistic);
    const auto at_least = static_cast<double>(sample_.end() - first);
    return {(1.0 + at_least) / (static_cast<double>(sample_.size()) + 1.0), Censoring::None};
}

double NullSample::threshold(double alpha) const {
    if (!(alpha > 0.0) || !(alpha <= 1.0)) {
        throw Error(ErrorCode::UnsupportedLevel, "alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    if (source_ == NullSource::Simulated && alpha >= 1.0) return sample_.front();
    return quantile(1.0 - alpha);
}

bool NullSample::rejects(double statistic, double alpha) const {
    if (source_ == NullSource::Published) {
        return statistic >= threshold(alpha);
    }
    if (!(alpha > 0.0) || !(alpha <= 1.0)) {
        throw Error(ErrorCode::UnsupportedLevel, "alpha must lie in (0, 1], got " + std::to_string(alpha));
    }
    return p_value(statistic).at_most(alpha);
}

PValue p_value(const NullSample& null, double statistic) {
    return null.p_value(statistic);
}

namespace {

template <class Statistic>
std::vector<double> simulate(std::size_t grid_size, std::size_t replicates, std::uint64_t seed,
                             std::uint64_t stream, unsigned threads, Statistic&& statistic) {
    if (grid_size < 50) {
        throw Error(ErrorCode::InvalidArgument, "grid size must be >= 50, got " + std::to_string(grid_size));
    }
    if (replicates < 100) {
        throw Error(ErrorCode::InvalidArgument, "replicates must be >= 100, got " + std::to_string(replicates));
    }
    std::vector<double> values(replicates);
    parallel_for(replicates, threads, [&](std::size_t r) {
        auto rng = make_rng(seed, stream, r);
        boost::random::normal_distribution<double> normal;
        std::vector<double> z(grid_size);
        for (auto& v : z) v = normal(rng);
        values[r] = statistic(z);
    });
    std::sort(values.begin(), values.end());
    return values;
}

constexpr std::uint64_t kStreamG = 0x47;
constexpr std::uint64_t kStreamGM = 0x474d;

}  // namespace

NullSample simulate_G(std::size_t grid_size, std::size_t replicates, std::uint64_t seed, unsigned threads) {
    auto values = simulate(grid_size, replicates, seed, kStreamG, threads,
                           [](const std::vector<double>& z) { return sn_statistic(z).statistic; });
    return NullSample::simulated(NullKind::G, std::move(values), {grid_size, replicates, 1, seed});
}

NullSample simulate_GM(std::size_t grid_size, std::size_t replicates, std::size_t stride, std::uint64_t seed,
                       unsigned threads) {
    const ScanSet scan(grid_size, stride);
    auto values = simulate(grid_size, replicates, seed, kStreamGM, threads,
                           [&](const std::vector<double>& z) { return multi_scan(z, scan).statistic; });
    return NullSample::simulated(NullKind::GM, std::move(values), {grid_size, replicates, stride, seed});
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

constexpr std::string_view kMagic = "# sssn null sample";

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::FormatError, "bad " + what + " '" + text + "'");
    }
    return value;
}

}  // namespace

void save_null(const NullSample& null, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    }
    const bool published = null.source() == NullSource::Published;
    out << kMagic << '\n';
    out << "format: 1\n";
    out << "kind: " << to_string(null.kind()) << '\n';
    out << "source: " << (published ? "published" : "simulated") << '\n';
    out << "grid_size: " << null.meta().grid_size << '\n';
    out << "replicates: " << null.meta().replicates << '\n';
    out << "stride: " << null.meta().stride << '\n';
    out << "seed: " << null.meta().seed << '\n';
    out << "values:\n";
    if (published) {
        for (double v : null.standard_quantiles()) out << format_double(v) << '\n';
    } else {
        for (double v : null.sample()) out << format_double(v) << '\n';
    }
    out << "end\n";
    if (!out) {
        throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
    }
}

NullSample load_null(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || trim(line) != kMagic) {
        throw Error(ErrorCode::FormatError, "'" + path.string() + "' is not a null sample file");
    }
    std::map<std::string, std::string> header;
    bool in_values = false;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t == "values:") {
            in_values = true;
            break;
        }
        const auto colon = t.find(':');
        if (colon == std::string::npos) {
            throw Error(ErrorCode::FormatError, "malformed header line '" + t + "'");
        }
        header[trim(std::string_view(t).substr(0, colon))] = trim(std::string_view(t).substr(colon + 1));
    }
    if (!in_values) {
        throw Error(ErrorCode::FormatError, "missing values section");
    }
    auto field = [&](const std::string& key) -> const std::string& {
        const auto it = header.find(key);
        if (it == header.end()) throw Error(ErrorCode::FormatError, "missing header field '" + key + "'");
        return it->second;
    };
    if (field("format") != "1") {
        throw Error(ErrorCode::FormatError, "unsupported format version " + field("format"));
    }
    NullKind kind{};
    try {
        kind = parse_null_kind(field("kind"));
    } catch (const Error&) {
        throw Error(ErrorCode::FormatError, "unknown kind '" + field("kind") + "'");
    }
    SimulationMeta meta;
    meta.grid_size = parse_number<std::size_t>(field("grid_size"), "grid_size");
    meta.replicates = parse_number<std::size_t>(field("replicates"), "replicates");
    meta.stride = parse_number<std::size_t>(field("stride"), "stride");
    meta.seed = parse_number<std::uint64_t>(field("seed"), "seed");

    std::vector<double> values;
    bool ended = false;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t == "end") {
            ended = true;
            break;
        }
        if (t.empty()) continue;
        values.push_back(parse_number<double>(t, "value"));
    }
    if (!ended) {
        throw Error(ErrorCode::FormatError, "'" + path.string() + "' is truncated (no end marker)");
    }

    const std::string& source = field("source");
    if (source == "published") {
        auto out = NullSample::published(kind);
        if (!std::equal(values.begin(), values.end(), out.standard_quantiles().begin(),
                        out.standard_quantiles().end())) {
            throw Error(ErrorCode::FormatError, "published table values do not match the built-in table");
        }
        return out;
    }
    if (source != "simulated") {
        throw Error(ErrorCode::FormatError, "unknown source '" + source + "'");
    }
    return NullSample::simulated(kind, std::move(values), meta);
}

}  // namespace sssn
