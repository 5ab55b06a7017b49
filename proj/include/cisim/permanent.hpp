/**
 * Copyright 2026 The cisim authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CISIM_PERMANENT_HPP
#define CISIM_PERMANENT_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

#include "cisim/common.hpp"

namespace cisim {

namespace detail {

/// Neumaier compensated accumulator; keeps 2^k-term Ryser sums accurate.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }

    double value() const { return sum + comp; }
};

}  // namespace detail

/// Exact permanent by Ryser's inclusion-exclusion with Gray-code subset
/// iteration, O(2^k k). The iteration order is fixed, so results are
/// bit-stable across runs.
inline std::complex<double> permanent_fast(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) {
        throw input_error("permanent of a non-square matrix");
    }
    const int k = static_cast<int>(m.rows());
    if (k == 0) {
        return {1.0, 0.0};
    }
    if (k == 1) {
        return m(0, 0);
    }
    if (k > 30) {
        throw input_error("permanent_fast supports k <= 30");
    }

    std::vector<std::complex<double>> row_sum(static_cast<size_t>(k), {0.0, 0.0});
    detail::CompensatedSum acc_re;
    detail::CompensatedSum acc_im;

    const std::uint64_t count = std::uint64_t{1} << k;
    std::uint64_t gray = 0;
    for (std::uint64_t i = 1; i < count; ++i) {
        const std::uint64_t next = i ^ (i >> 1);
        const std::uint64_t flipped = gray ^ next;
        const int col = std::countr_zero(flipped);
        if (next & flipped) {
            for (int r = 0; r < k; ++r) {
                row_sum[static_cast<size_t>(r)] += m(r, col);
            }
        } else {
            for (int r = 0; r < k; ++r) {
                row_sum[static_cast<size_t>(r)] -= m(r, col);
            }
        }
        gray = next;

        std::complex<double> prod = row_sum[0];
        for (int r = 1; r < k; ++r) {
            prod *= row_sum[static_cast<size_t>(r)];
        }
        const double sign = (std::popcount(next) % 2 == 0) ? 1.0 : -1.0;
        acc_re.add(sign * prod.real());
        acc_im.add(sign * prod.imag());
    }

    const double outer = (k % 2 == 0) ? 1.0 : -1.0;
    return {outer * acc_re.value(), outer * acc_im.value()};
}

/// Reference permanent: direct sum over all k! permutations. Verification
/// oracle for permanent_fast; limited to k <= 10.
inline std::complex<double> permanent_naive(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) {
        throw input_error("permanent of a non-square matrix");
    }
    const int k = static_cast<int>(m.rows());
    if (k == 0) {
        return {1.0, 0.0};
    }
    if (k > 10) {
        throw input_error("permanent_naive supports k <= 10");
    }
    std::vector<int> perm(static_cast<size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::complex<double> total{0.0, 0.0};
    do {
        std::complex<double> prod{1.0, 0.0};
        for (int i = 0; i < k; ++i) {
            prod *= m(i, perm[static_cast<size_t>(i)]);
        }
        total += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

}  // namespace cisim

#endif
