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

#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "cisim/permanent.hpp"

using cisim::permanent_fast;
using cisim::permanent_naive;

namespace {

Eigen::MatrixXcd random_complex(int k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Eigen::MatrixXcd m(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            m(i, j) = std::complex<double>(u(rng), u(rng));
        }
    }
    return m;
}

}  // namespace

TEST_CASE("permanent definition cases", "[permanent]") {
    CHECK(permanent_fast(Eigen::MatrixXcd(0, 0)) == std::complex<double>(1.0, 0.0));
    CHECK(permanent_naive(Eigen::MatrixXcd(0, 0)) == std::complex<double>(1.0, 0.0));

    std::mt19937_64 rng(7);
    const Eigen::MatrixXcd m = random_complex(2, rng);
    const std::complex<double> expected = m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);
    CHECK(std::abs(permanent_fast(m) - expected) < 1e-14);
    CHECK(std::abs(permanent_naive(m) - expected) < 1e-14);

    CHECK(std::abs(permanent_fast(Eigen::MatrixXcd::Identity(5, 5)) - 1.0) < 1e-14);
    CHECK(std::abs(permanent_fast(Eigen::MatrixXcd::Ones(6, 6)) - 720.0) < 1e-11);
}

TEST_CASE("bidiagonal closed forms", "[permanent]") {
    // lower bidiagonal (+1 diagonal, -1 subdiagonal) scaled by 1/2 has
    // permanent (1/2)^m; the shifted variant (-1 diagonal, +1 superdiagonal)
    // has permanent (-1/2)^m, m the matrix dimension
    for (int m = 1; m <= 12; ++m) {
        Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(m, m);
        Eigen::MatrixXcd upper = Eigen::MatrixXcd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            lower(i, i) = 0.5;
            upper(i, i) = -0.5;
            if (i + 1 < m) {
                lower(i + 1, i) = -0.5;
                upper(i, i + 1) = 0.5;
            }
        }
        const double expected = std::pow(0.5, m);
        CHECK(std::abs(permanent_fast(lower) - expected) < 1e-14);
        CHECK(std::abs(permanent_fast(upper) - std::pow(-0.5, m)) < 1e-14);
        if (m <= 10) {
            CHECK(std::abs(permanent_naive(lower) - expected) < 1e-14);
            CHECK(std::abs(permanent_naive(upper) - std::pow(-0.5, m)) < 1e-14);
        }
    }
}

TEST_CASE("fast agrees with the permutation-sum oracle", "[permanent]") {
    std::mt19937_64 rng(20260810);
    std::uniform_int_distribution<int> size(1, 9);
    for (int trial = 0; trial < 500; ++trial) {
        const int k = size(rng);
        const Eigen::MatrixXcd m = random_complex(k, rng);
        const std::complex<double> fast = permanent_fast(m);
        const std::complex<double> naive = permanent_naive(m);
        const double scale = std::max(1e-30, std::abs(naive));
        CHECK(std::abs(fast - naive) / scale < 1e-10);
    }
}

TEST_CASE("permutation invariance and row linearity", "[permanent]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 6;
        const Eigen::MatrixXcd m = random_complex(k, rng);
        const std::complex<double> base = permanent_fast(m);

        Eigen::MatrixXcd rows = m;
        rows.row(1).swap(rows.row(4));
        CHECK(std::abs(permanent_fast(rows) - base) < 1e-12);

        Eigen::MatrixXcd cols = m;
        cols.col(0).swap(cols.col(5));
        CHECK(std::abs(permanent_fast(cols) - base) < 1e-12);

        const std::complex<double> scale(0.3, -1.7);
        Eigen::MatrixXcd scaled = m;
        scaled.row(2) *= scale;
        CHECK(std::abs(permanent_fast(scaled) - scale * base) < 1e-11);
    }
}

TEST_CASE("permanent input validation", "[permanent]") {
    CHECK_THROWS_AS(permanent_fast(Eigen::MatrixXcd::Zero(2, 3)), cisim::input_error);
    CHECK_THROWS_AS(permanent_naive(Eigen::MatrixXcd::Zero(11, 11)), cisim::input_error);
    CHECK_THROWS_AS(permanent_fast(Eigen::MatrixXcd::Zero(31, 31)), cisim::input_error);
}
