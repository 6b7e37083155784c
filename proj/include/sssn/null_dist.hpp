#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "sssn/outcome.hpp"

namespace sssn {

/// G: limit law of the single change-point statistic.
/// GM: limit law of the forward + backward multiple change-point statistic.
enum class NullKind { G, GM };

[[nodiscard]] std::string_view to_string(NullKind kind) noexcept;
[[nodiscard]] NullKind parse_null_kind(std::string_view text);

enum class NullSource {
    Simulated,  ///< an empirical sample produced by simulate_G / simulate_GM
    Published,  ///< the six published critical values only
};

struct SimulationMeta {
    std::size_t grid_size = 0;
    std::size_t replicates = 0;
    std::size_t stride = 1;
    std::uint64_t seed = 0;

    friend bool operator==(const SimulationMeta&, const SimulationMeta&) = default;
};

inline constexpr std::array<double, 6> kStandardLevels{0.90, 0.95, 0.975, 0.99, 0.995, 0.999};
/// Upper-tail probabilities 1 - level, written exactly.
inline constexpr std::array<double, 6> kStandardTails{0.10, 0.05, 0.025, 0.01, 0.005, 0.001};
inline constexpr std::array<double, 6> kPublishedG{4.32, 5.39, 6.38, 7.58, 8.49, 10.40};
inline constexpr std::array<double, 6> kPublishedGM{20.71, 23.16, 26.75, 35.50, 45.74, 102.97};

/// Calibration source for a test: either a sorted simulated sample or the
/// published quantile table. Immutable once built.
///
/// Simulated samples use the order-statistic quantile sample[ceil(qR) - 1]
/// and the Monte Carlo p-value (1 + #{sample >= s}) / (R + 1).
///
/// Published tables interpolate linearly in the level between the six
/// anchors, so they only support levels alpha in [0.001, 0.10]; outside the
/// anchors the p-value is reported as a bound.
class NullSample {
public:
    [[nodiscard]] static NullSample published(NullKind kind);
    /// Throws FormatError if `sorted` is empty, unsorted, contains non-finite
    /// values or disagrees with meta.replicates.
    [[nodiscard]] static NullSample simulated(NullKind kind, std::vector<double> sorted, SimulationMeta meta);

    [[nodiscard]] NullKind kind() const noexcept { return kind_; }
    [[nodiscard]] NullSource source() const noexcept { return source_; }
    [[nodiscard]] const SimulationMeta& meta() const noexcept { return meta_; }
    [[nodiscard]] std::span<const double> sample() const noexcept { return sample_; }

    /// q in (0, 1). Published tables throw UnsupportedLevel outside [0.90, 0.999].
    [[nodiscard]] double quantile(double q) const;
    /// The six standard quantiles, cached at construction.
    [[nodiscard]] const std::array<double, 6>& standard_quantiles() const noexcept { return standard_; }

    [[nodiscard]] PValue p_value(double statistic) const;
    /// Critical value at level alpha: the (1 - alpha) quantile. For a
    /// simulated sample alpha = 1 gives the sample minimum.
    [[nodiscard]] double threshold(double alpha) const;
    /// Decision at level alpha: p <= alpha for simulated samples,
    /// statistic >= threshold(alpha) for published tables.
    [[nodiscard]] bool rejects(double statistic, double alpha) const;

    friend bool operator==(const NullSample&, const NullSample&) = default;

private:
    NullKind kind_ = NullKind::G;
    NullSource source_ = NullSource::Published;
    SimulationMeta meta_;
    std::vector<double> sample_;
    std::array<double, 6> standard_{};
};

/// Free-function form of NullSample::p_value.
[[nodiscard]] PValue p_value(const NullSample& null, double statistic);

/// Draws `replicates` iid N(0,1) sequences of length grid_size and records
/// the single change-point statistic of each. Requires grid_size >= 50 and
/// replicates >= 100. Deterministic in seed for any thread count
/// (threads = 0 uses all cores).
[[nodiscard]] NullSample simulate_G(std::size_t grid_size, std::size_t replicates, std::uint64_t seed,
                                    unsigned threads = 0);

/// As simulate_G with the multiple change-point scan at the given stride.
[[nodiscard]] NullSample simulate_GM(std::size_t grid_size, std::size_t replicates, std::size_t stride,
                                     std::uint64_t seed, unsigned threads = 0);

/// Text container: "# sssn null sample" line, "key: value" header lines,
/// a "values:" line, one shortest-round-trip value per line, "end".
void save_null(const NullSample& null, const std::filesystem::path& path);
[[nodiscard]] NullSample load_null(const std::filesystem::path& path);

}  // namespace sssn
