#include "sssn/panel.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "sssn/error.hpp"

namespace sssn {

PanelSeries::PanelSeries(Eigen::MatrixXd data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.cols() < 1) {
        throw Error(ErrorCode::DimensionMismatch, "panel must have n >= 1 and p >= 1");
    }
    if (!data_.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "panel contains non-finite entries");
    }
}

DecimalRatio DecimalRatio::parse(std::string_view text) {
    DecimalRatio r;
    bool seen_point = false;
    bool seen_digit = false;
    std::size_t i = 0;
    if (!text.empty() && text[0] == '+') ++i;
    if (i < text.size() && text[i] == '-') {
        throw Error(ErrorCode::InvalidSplit, "negative ratio '" + std::string(text) + "'");
    }
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '.' && !seen_point) {
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') {
            throw Error(ErrorCode::InvalidSplit, "not a plain decimal: '" + std::string(text) + "'");
        }
        seen_digit = true;
        if (seen_point) {
            if (r.scale >= 17) continue;  // beyond double resolution
            ++r.scale;
        }
        if (r.num > (INT64_MAX - 9) / 10) {
            throw Error(ErrorCode::InvalidSplit, "decimal too long: '" + std::string(text) + "'");
        }
        r.num = r.num * 10 + (c - '0');
    }
    if (!seen_digit) {
        throw Error(ErrorCode::InvalidSplit, "empty decimal");
    }
    return r;
}

DecimalRatio DecimalRatio::from_double(double value) {
    if (!std::isfinite(value)) {
        throw Error(ErrorCode::InvalidSplit, "non-finite ratio");
    }
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
    if (ec != std::errc{}) {
        throw Error(ErrorCode::InvalidSplit, "cannot format ratio");
    }
    return parse(std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data())));
}

double DecimalRatio::to_double() const noexcept {
    return static_cast<double>(num) / std::pow(10.0, scale);
}

namespace {

__extension__ using wide = __int128;

// floor(n * a / 10^sa - n * b / 10^sb) on exact integers.
std::size_t floor_scaled_difference(std::size_t n, DecimalRatio a, DecimalRatio b) {
    const int scale = std::max(a.scale, b.scale);
    wide pa = a.num;
    wide pb = b.num;
    for (int s = a.scale; s < scale; ++s) pa *= 10;
    for (int s = b.scale; s < scale; ++s) pb *= 10;
    wide den = 1;
    for (int s = 0; s < scale; ++s) den *= 10;
    const wide numer = static_cast<wide>(n) * (pa - pb);
    // numer >= 0 is guaranteed by the callers.
    return static_cast<std::size_t>(numer / den);
}

bool less_than(DecimalRatio a, DecimalRatio b) {
    const int scale = std::max(a.scale, b.scale);
    wide pa = a.num;
    wide pb = b.num;
    for (int s = a.scale; s < scale; ++s) pa *= 10;
    for (int s = b.scale; s < scale; ++s) pb *= 10;
    return pa < pb;
}

}  // namespace

std::size_t DecimalRatio::floor_times(std::size_t n) const {
    if (num < 0) {
        throw Error(ErrorCode::InvalidArgument, "floor_times needs a nonnegative ratio");
    }
    return floor_scaled_difference(n, *this, DecimalRatio{0, 0});
}

SplitPlan make_split_plan(std::size_t n, DecimalRatio epsilon, DecimalRatio eta) {
    const DecimalRatio half{5, 1};
    if (eta.num <= 0 || !less_than(eta, epsilon) || !less_than(epsilon, half)) {
        throw Error(ErrorCode::InvalidSplit, "require 0 < eta < epsilon < 0.5, got epsilon=" +
                                                 std::to_string(epsilon.to_double()) +
                                                 " eta=" + std::to_string(eta.to_double()));
    }
    if (n < 1) {
        throw Error(ErrorCode::InsufficientSample, "n must be positive");
    }
    SplitPlan plan;
    plan.epsilon = epsilon.to_double();
    plan.eta = eta.to_double();
    plan.n = n;
    plan.m = floor_scaled_difference(n, epsilon, DecimalRatio{0, 0});
    plan.m1 = floor_scaled_difference(n, epsilon, eta);
    plan.m2 = plan.m - plan.m1;
    plan.N = n - 2 * plan.m;
    if (plan.m1 < 1 || plan.m2 < 1 || plan.N < 4) {
        throw Error(ErrorCode::InsufficientSample,
                    "n=" + std::to_string(n) + " gives m1=" + std::to_string(plan.m1) +
                        ", m2=" + std::to_string(plan.m2) + ", N=" + std::to_string(plan.N) +
                        " (need m1 >= 1, m2 >= 1, N >= 4)");
    }
    return plan;
}

SplitPlan make_split_plan(std::size_t n, double epsilon, double eta) {
    if (!(eta > 0.0) || !(eta < epsilon) || !(epsilon < 0.5)) {
        throw Error(ErrorCode::InvalidSplit, "require 0 < eta < epsilon < 0.5");
    }
    return make_split_plan(n, DecimalRatio::from_double(epsilon), DecimalRatio::from_double(eta));
}

namespace {

void check_plan(const PanelSeries& x, const SplitPlan& plan) {
    if (plan.n != x.n()) {
        throw Error(ErrorCode::DimensionMismatch, "plan built for n=" + std::to_string(plan.n) +
                                                      " but panel has n=" + std::to_string(x.n()));
    }
}

}  // namespace

Eigen::VectorXd dense_direction(const PanelSeries& x, const SplitPlan& plan) {
    check_plan(x, plan);
    const auto& X = x.data();
    const auto m1 = static_cast<Eigen::Index>(plan.m1);
    Eigen::VectorXd head = X.topRows(m1).colwise().sum().transpose();
    Eigen::VectorXd tail = X.bottomRows(m1).colwise().sum().transpose();
    return (head - tail) / static_cast<double>(plan.m1);
}

SparseDirection sparse_direction(const PanelSeries& x, const SplitPlan& plan) {
    const Eigen::VectorXd diff = dense_direction(x, plan);
    Eigen::Index best = 0;
    double best_abs = std::abs(diff[0]);
    for (Eigen::Index k = 1; k < diff.size(); ++k) {
        if (std::abs(diff[k]) > best_abs) {
            best_abs = std::abs(diff[k]);
            best = k;
        }
    }
    SparseDirection out;
    out.direction = Eigen::VectorXd::Zero(diff.size());
    out.direction[best] = diff[best] < 0.0 ? -1.0 : 1.0;
    out.index = static_cast<std::size_t>(best) + 1;
    return out;
}

ProjectedSeries project(const PanelSeries& x, const Eigen::VectorXd& direction, const SplitPlan& plan) {
    check_plan(x, plan);
    if (static_cast<std::size_t>(direction.size()) != x.p()) {
        throw Error(ErrorCode::DimensionMismatch, "direction has length " + std::to_string(direction.size()) +
                                                      ", panel has p=" + std::to_string(x.p()));
    }
    ProjectedSeries out;
    out.y = x.data().middleRows(static_cast<Eigen::Index>(plan.m), static_cast<Eigen::Index>(plan.N)) * direction;
    out.direction = direction;
    out.plan = plan;
    return out;
}

}  // namespace sssn
