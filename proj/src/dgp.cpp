#include "sssn/dgp.hpp"

#include <cmath>
#include <string>

#include <boost/random/normal_distribution.hpp>

#include "sssn/error.hpp"
#include "sssn/parallel.hpp"

namespace sssn {

std::string_view to_string(CovKind kind) noexcept {
    switch (kind) {
        case CovKind::AR: return "AR";
        case CovKind::CS: return "CS";
        case CovKind::ID: return "ID";
    }
    return "ID";
}

CovKind parse_cov_kind(std::string_view text) {
    if (text == "AR") return CovKind::AR;
    if (text == "CS") return CovKind::CS;
    if (text == "ID") return CovKind::ID;
    throw Error(ErrorCode::InvalidArgument, "unknown covariance kind '" + std::string(text) + "' (AR, CS or ID)");
}

std::string_view to_string(DgpFamily family) noexcept {
    switch (family) {
        case DgpFamily::Var1: return "var1";
        case DgpFamily::LinearProcess: return "linear_process";
        case DgpFamily::Factor: return "factor";
    }
    return "var1";
}

DgpFamily parse_dgp_family(std::string_view text) {
    if (text == "var1") return DgpFamily::Var1;
    if (text == "linear_process") return DgpFamily::LinearProcess;
    if (text == "factor") return DgpFamily::Factor;
    throw Error(ErrorCode::InvalidArgument,
                "unknown family '" + std::string(text) + "' (var1, linear_process or factor)");
}

namespace {

void check_cov(const CovSpec& spec) {
    if (spec.p == 0) {
        throw Error(ErrorCode::InvalidArgument, "covariance dimension must be positive");
    }
    if (spec.kind == CovKind::AR && !(std::abs(spec.rho) < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "AR covariance needs |rho| < 1, got " + std::to_string(spec.rho));
    }
}

}  // namespace

Eigen::MatrixXd covariance(const CovSpec& spec) {
    check_cov(spec);
    const auto p = static_cast<Eigen::Index>(spec.p);
    switch (spec.kind) {
        case CovKind::ID: return Eigen::MatrixXd::Identity(p, p);
        case CovKind::CS: {
            Eigen::MatrixXd s = Eigen::MatrixXd::Constant(p, p, 0.5);
            s.diagonal().setOnes();
            return s;
        }
        case CovKind::AR: {
            Eigen::MatrixXd s(p, p);
            for (Eigen::Index i = 0; i < p; ++i) {
                for (Eigen::Index j = 0; j < p; ++j) {
                    s(i, j) = std::pow(spec.rho, static_cast<double>(std::abs(i - j)));
                }
            }
            return s;
        }
    }
    return Eigen::MatrixXd::Identity(p, p);
}

Eigen::MatrixXd build_cov(const CovSpec& spec) {
    const Eigen::LLT<Eigen::MatrixXd> llt(covariance(spec));
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::NotPositiveDefinite, "Cholesky factorization failed");
    }
    return llt.matrixL();
}

Colorer::Colorer(const CovSpec& spec) : spec_(spec) {
    check_cov(spec);
    if (spec.kind == CovKind::AR) {
        ar_scale_ = std::sqrt(1.0 - spec.rho * spec.rho);
    } else if (spec.kind == CovKind::CS) {
        below_.resize(spec.p);
        diagonal_.resize(spec.p);
        double used = 0.0;  // sum of squared below-diagonal entries so far
        for (std::size_t j = 0; j < spec.p; ++j) {
            diagonal_[j] = std::sqrt(1.0 - used);
            below_[j] = (0.5 - used) / diagonal_[j];
            used += below_[j] * below_[j];
        }
    }
}

void Colorer::apply(std::span<double> z) const {
    if (z.size() != spec_.p) {
        throw Error(ErrorCode::DimensionMismatch,
                    "vector of length " + std::to_string(z.size()) + ", expected " + std::to_string(spec_.p));
    }
    switch (spec_.kind) {
        case CovKind::ID: return;
        case CovKind::AR:
            for (std::size_t i = 1; i < z.size(); ++i) z[i] = spec_.rho * z[i - 1] + ar_scale_ * z[i];
            return;
        case CovKind::CS: {
            double prefix = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double zi = z[i];
                z[i] = prefix + diagonal_[i] * zi;
                prefix += below_[i] * zi;
            }
            return;
        }
    }
}

void validate(const DgpSpec& spec) {
    if (spec.n == 0 || spec.p == 0) {
        throw Error(ErrorCode::InvalidArgument, "n and p must be positive");
    }
    if (spec.cov.p != spec.p) {
        throw Error(ErrorCode::DimensionMismatch, "covariance dimension " + std::to_string(spec.cov.p) +
                                                      " differs from p = " + std::to_string(spec.p));
    }
    check_cov(spec.cov);
    if (!(std::abs(spec.kappa) < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "kappa must satisfy |kappa| < 1");
    }
    if (!(std::abs(spec.linear.theta) < 1.0) || !(spec.linear.beta >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "linear process needs |theta| < 1 and beta >= 0");
    }
    if (spec.factor.count == 0) {
        throw Error(ErrorCode::InvalidArgument, "factor count must be >= 1");
    }
    if (!(std::abs(spec.factor.ar) < 1.0) || !std::isfinite(spec.factor.loading_scale)) {
        throw Error(ErrorCode::InvalidArgument, "factor model needs |ar| < 1 and a finite loading scale");
    }
}

std::vector<double> linear_weights(const LinearProcessSpec& spec) {
    if (!(std::abs(spec.theta) < 1.0) || !(spec.beta >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "linear process needs |theta| < 1 and beta >= 0");
    }
    constexpr double kCutoff = 1e-8;
    std::vector<double> a{1.0};
    double power = 1.0;
    for (std::size_t j = 1;; ++j) {
        power *= spec.theta;
        const double w = power * std::pow(static_cast<double>(j + 1), -spec.beta);
        if (std::abs(w) < kCutoff) break;
        a.push_back(w);
    }
    return a;
}

std::vector<std::size_t> break_times(const ShiftSpec& shift, std::size_t n, std::size_t p) {
    std::vector<std::size_t> times;
    double previous = 0.0;
    for (const auto& b : shift.breaks) {
        if (!(b.location > previous) || !(b.location < 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "break locations must be strictly increasing in (0, 1)");
        }
        if (static_cast<std::size_t>(b.delta.size()) != p) {
            throw Error(ErrorCode::DimensionMismatch, "shift vector of length " + std::to_string(b.delta.size()) +
                                                          ", expected " + std::to_string(p));
        }
        previous = b.location;
        times.push_back(DecimalRatio::from_double(b.location).floor_times(n));
    }
    return times;
}

Eigen::MatrixXd mean_path(const ShiftSpec& shift, std::size_t n, std::size_t p) {
    const auto times = break_times(shift, n, p);
    Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < times.size(); ++i) {
        // rows t > k, i.e. 0-based rows k..n-1
        const auto k = static_cast<Eigen::Index>(times[i]);
        mu.bottomRows(static_cast<Eigen::Index>(n) - k).rowwise() += shift.breaks[i].delta.transpose();
    }
    return mu;
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr std::uint64_t kStreamPanel = 0x70616e656c;

class Normals {
public:
    explicit Normals(std::uint64_t seed) : rng_(make_rng(seed, kStreamPanel, 0)) {}
    double operator()() { return normal_(rng_); }
    void fill(std::span<double> out) {
        for (auto& v : out) v = normal_(rng_);
    }

private:
    Rng rng_;
    boost::random::normal_distribution<double> normal_;
};

// Rows are innovations N(0, Sigma).
RowMatrix innovations(std::size_t rows, const Colorer& colorer, Normals& normals) {
    RowMatrix e(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(colorer.p()));
    for (Eigen::Index t = 0; t < e.rows(); ++t) {
        std::span<double> row(e.row(t).data(), colorer.p());
        normals.fill(row);
        colorer.apply(row);
    }
    return e;
}

RowMatrix var1(const DgpSpec& dgp, const Colorer& colorer, Normals& normals) {
    const RowMatrix eps = innovations(dgp.n + 1, colorer, normals);
    RowMatrix x(static_cast<Eigen::Index>(dgp.n), static_cast<Eigen::Index>(dgp.p));
    Eigen::RowVectorXd state = eps.row(0) / std::sqrt(1.0 - dgp.kappa * dgp.kappa);
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        state = dgp.kappa * state + eps.row(t + 1);
        x.row(t) = state;
    }
    return x;
}

RowMatrix linear_process(std::size_t n, const LinearProcessSpec& spec, const Colorer& colorer,
                         Normals& normals) {
    const auto a = linear_weights(spec);
    const std::size_t lags = a.size() - 1;
    const RowMatrix eps = innovations(n + lags, colorer, normals);
    RowMatrix x = RowMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(colorer.p()));
    for (std::size_t t = 0; t < n; ++t) {
        // eps row lags + t holds the innovation at time t
        for (std::size_t j = 0; j <= lags; ++j) {
            x.row(static_cast<Eigen::Index>(t)) += a[j] * eps.row(static_cast<Eigen::Index>(lags + t - j));
        }
    }
    return x;
}

RowMatrix factor_model(const DgpSpec& dgp, const Colorer& colorer, Normals& normals) {
    const auto s = static_cast<Eigen::Index>(dgp.factor.count);
    const auto n = static_cast<Eigen::Index>(dgp.n);
    Eigen::MatrixXd loadings(static_cast<Eigen::Index>(dgp.p), s);
    for (Eigen::Index i = 0; i < loadings.rows(); ++i) {
        for (Eigen::Index j = 0; j < s; ++j) loadings(i, j) = dgp.factor.loading_scale * normals();
    }
    const double phi = dgp.factor.ar;
    const double scale = std::sqrt(1.0 - phi * phi);
    Eigen::MatrixXd factors(n, s);
    Eigen::VectorXd state(s);
    for (Eigen::Index j = 0; j < s; ++j) state(j) = normals();
    for (Eigen::Index t = 0; t < n; ++t) {
        for (Eigen::Index j = 0; j < s; ++j) state(j) = phi * state(j) + scale * normals();
        factors.row(t) = state.transpose();
    }
    RowMatrix x = linear_process(dgp.n, dgp.linear, colorer, normals);
    x += factors * loadings.transpose();
    return x;
}

}  // namespace

PanelSeries gen_panel(const DgpSpec& dgp, const ShiftSpec& shift) {
    validate(dgp);
    const Eigen::MatrixXd mu = mean_path(shift, dgp.n, dgp.p);
    const Colorer colorer(dgp.cov);
    Normals normals(dgp.seed);
    RowMatrix x;
    switch (dgp.family) {
        case DgpFamily::Var1: x = var1(dgp, colorer, normals); break;
        case DgpFamily::LinearProcess: x = linear_process(dgp.n, dgp.linear, colorer, normals); break;
        case DgpFamily::Factor: x = factor_model(dgp, colorer, normals); break;
    }
    return PanelSeries(Eigen::MatrixXd(x) + mu);
}

ShiftSpec preset_shift(std::string_view name, double c, std::size_t n, std::size_t p) {
    if (!std::isfinite(c)) {
        throw Error(ErrorCode::InvalidPreset, "shift size must be finite");
    }
    if (p == 0 || n == 0) {
        throw Error(ErrorCode::InvalidPreset, "n and p must be positive");
    }
    const auto dim = static_cast<Eigen::Index>(p);
    const Eigen::VectorXd dense = Eigen::VectorXd::Constant(dim, c / std::sqrt(static_cast<double>(p)));
    auto sparse = [&] {
        if (p < 3) throw Error(ErrorCode::InvalidPreset, "sparse patterns need p >= 3");
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
        v(2) = c;
        return v;
    };

    ShiftSpec out;
    if (name == "none") {
        return out;
    } else if (name == "dense_mid") {
        out.breaks = {{0.5, dense}};
    } else if (name == "sparse_mid") {
        out.breaks = {{0.5, sparse()}};
    } else if (name == "DD") {
        out.breaks = {{0.3, dense}, {0.7, dense}};
    } else if (name == "SS") {
        const auto s = sparse();
        out.breaks = {{0.3, s}, {0.7, s}};
    } else if (name == "DS") {
        if (p < 5) throw Error(ErrorCode::InvalidPreset, "DS needs p >= 5");
        Eigen::VectorXd last = Eigen::VectorXd::Zero(dim);
        last.head(5).setConstant(2.0 * c / std::sqrt(5.0));
        out.breaks = {{0.3, dense}, {0.7, last - dense}};
    } else if (name == "DDD") {
        out.breaks = {{0.2, dense}, {0.4, dense}, {0.8, dense}};
    } else {
        throw Error(ErrorCode::InvalidPreset, "unknown preset '" + std::string(name) +
                                                  "' (none, dense_mid, sparse_mid, DD, SS, DS, DDD)");
    }
    const auto times = break_times(out, n, p);
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] == 0 || (i > 0 && times[i] == times[i - 1])) {
            throw Error(ErrorCode::InvalidPreset, "n = " + std::to_string(n) + " is too short for preset '" +
                                                      std::string(name) + "'");
        }
    }
    return out;
}

}  // namespace sssn
