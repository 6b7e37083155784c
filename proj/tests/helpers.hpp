#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "sssn/error.hpp"
#include "sssn/panel.hpp"

namespace testing_util {

inline std::vector<double> normals(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> out(n);
    for (auto& v : out) v = z(rng);
    return out;
}

inline Eigen::MatrixXd normal_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    const auto v = normals(rows * cols, seed);
    return Eigen::Map<const Eigen::MatrixXd>(v.data(), static_cast<Eigen::Index>(rows),
                                             static_cast<Eigen::Index>(cols));
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Error code thrown by f(); records a failure if nothing is thrown.
template <class F>
sssn::ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const sssn::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return sssn::ErrorCode::IoError;
}

}  // namespace testing_util
