#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sssn/panel.hpp"

namespace sssn {

enum class CovKind {
    AR,  ///< rho^|i-j|
    CS,  ///< 0.5 off the diagonal, 1 on it
    ID,
};

[[nodiscard]] std::string_view to_string(CovKind kind) noexcept;
[[nodiscard]] CovKind parse_cov_kind(std::string_view text);

struct CovSpec {
    CovKind kind = CovKind::ID;
    std::size_t p = 1;
    double rho = 0.0;  ///< AR only, |rho| < 1
};

/// Dense covariance matrix for `spec`. InvalidArgument on p = 0 or |rho| >= 1.
[[nodiscard]] Eigen::MatrixXd covariance(const CovSpec& spec);

/// Lower Cholesky factor L of the covariance, L L' = Sigma.
[[nodiscard]] Eigen::MatrixXd build_cov(const CovSpec& spec);

/// Applies the Cholesky factor of `spec` to a vector in O(p) using the
/// closed-form structure of each covariance kind. Agrees with
/// build_cov(spec) * z up to rounding.
class Colorer {
public:
    explicit Colorer(const CovSpec& spec);
    void apply(std::span<double> z) const;
    [[nodiscard]] std::size_t p() const noexcept { return spec_.p; }

private:
    CovSpec spec_;
    double ar_scale_ = 1.0;
    std::vector<double> below_;     // CS: L(i, j) for i > j
    std::vector<double> diagonal_;  // CS: L(j, j)
};

enum class DgpFamily { Var1, LinearProcess, Factor };

[[nodiscard]] std::string_view to_string(DgpFamily family) noexcept;
[[nodiscard]] DgpFamily parse_dgp_family(std::string_view text);

/// Coefficients a_j = theta^j (j + 1)^(-beta) I_p, truncated once
/// |a_j| < 1e-8.
struct LinearProcessSpec {
    double theta = 0.5;
    double beta = 1.0;
};

struct FactorSpec {
    std::size_t count = 3;
    double loading_scale = 1.0;
    double ar = 0.5;
};

struct DgpSpec {
    DgpFamily family = DgpFamily::Var1;
    std::size_t n = 0;
    std::size_t p = 0;
    double kappa = 0.0;  ///< var1 only
    CovSpec cov;         ///< innovation covariance; cov.p must equal p
    LinearProcessSpec linear;
    FactorSpec factor;   ///< the idiosyncratic part uses `linear`
    std::uint64_t seed = 0;
};

/// Throws InvalidArgument on an inconsistent spec.
void validate(const DgpSpec& spec);

/// Truncated linear-process weights a_0, a_1, ... (scalars).
[[nodiscard]] std::vector<double> linear_weights(const LinearProcessSpec& spec);

struct MeanBreak {
    double location = 0.5;  ///< relative, in (0, 1); the break is at floor(n * location)
    Eigen::VectorXd delta;  ///< increment added to the mean after the break
};

/// Piecewise-constant mean mu_t = sum_i delta_i 1{t > floor(n * xi_i)}.
struct ShiftSpec {
    std::vector<MeanBreak> breaks;
};

/// Break times floor(n * xi_i). Throws InvalidArgument unless locations are
/// strictly increasing in (0, 1), DimensionMismatch on a wrong-length delta.
[[nodiscard]] std::vector<std::size_t> break_times(const ShiftSpec& shift, std::size_t n, std::size_t p);

/// n x p matrix of means.
[[nodiscard]] Eigen::MatrixXd mean_path(const ShiftSpec& shift, std::size_t n, std::size_t p);

/// Deterministic in dgp.seed.
[[nodiscard]] PanelSeries gen_panel(const DgpSpec& dgp, const ShiftSpec& shift = {});

/// none, dense_mid, sparse_mid, DD, SS, DS, DDD. InvalidPreset on an unknown
/// name or a dimension too small for the pattern.
[[nodiscard]] ShiftSpec preset_shift(std::string_view name, double c, std::size_t n, std::size_t p);

}  // namespace sssn
