#include "cusum.hpp"

#include <algorithm>
#include <cmath>

namespace sssn::detail {

CusumTable::CusumTable(std::span<const double> y) : n_(y.size()) {
    long double mean = 0;
    double max_abs = 0;
    for (double v : y) {
        mean += v;
        max_abs = std::max(max_abs, std::abs(v));
    }
    mean /= static_cast<long double>(n_ == 0 ? 1 : n_);

    std::vector<long double> centered(n_);
    long double ss = 0;
    long double max_dev = 0;
    for (std::size_t t = 0; t < n_; ++t) {
        centered[t] = static_cast<long double>(y[t]) - mean;
        ss += centered[t] * centered[t];
        max_dev = std::max(max_dev, std::abs(centered[t]));
    }
    // Relative variation below ~1e-12 is indistinguishable from rounding of
    // a constant series.
    constant_ = n_ == 0 || max_dev <= 1e-12L * static_cast<long double>(max_abs);
    const long double sd = constant_ ? 1.0L : std::sqrt(ss / static_cast<long double>(n_));

    P_.assign(n_ + 1, 0.0L);
    P_double_.assign(n_ + 1, 0.0);
    cP_.assign(n_ + 2, 0.0L);
    cPP_.assign(n_ + 2, 0.0L);
    cjP_.assign(n_ + 2, 0.0L);
    for (std::size_t t = 0; t < n_; ++t) {
        P_[t + 1] = P_[t] + (constant_ ? 0.0L : centered[t] / sd);
    }
    for (std::size_t j = 0; j <= n_; ++j) {
        P_double_[j] = static_cast<double>(P_[j]);
        cP_[j + 1] = cP_[j] + P_[j];
        cPP_[j + 1] = cPP_[j] + P_[j] * P_[j];
        cjP_[j + 1] = cjP_[j] + static_cast<long double>(j) * P_[j];
    }
}

BridgeSum CusumTable::bridge(std::size_t s, std::size_t e) const noexcept {
    const auto count = static_cast<long double>(e - s + 1);
    const auto span = static_cast<long double>(e - s);
    const long double sum_p = cP_[e + 1] - cP_[s];
    const long double sum_pp = cPP_[e + 1] - cPP_[s];
    const long double sum_dp = (cjP_[e + 1] - cjP_[s]) - static_cast<long double>(s) * sum_p;
    const long double sum_d = span * (span + 1) / 2;
    const long double sum_dd = span * (span + 1) * (2 * span + 1) / 6;

    const long double a = P_[s];
    const long double slope = (P_[e] - a) / span;

    BridgeSum out;
    out.reference = std::max(0.0L, sum_pp - 2 * a * sum_p + count * a * a);
    const long double cross = sum_dp - a * sum_d;
    out.value = std::max(0.0L, out.reference - 2 * slope * cross + slope * slope * sum_dd);
    return out;
}

}  // namespace sssn::detail
