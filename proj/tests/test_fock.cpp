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

#include "cisim/circuit.hpp"
#include "cisim/fock.hpp"
#include "cisim/interference.hpp"
#include "testutil.hpp"

using cisim::FockState;

TEST_CASE("from_modes builds occupation vectors", "[fock]") {
    CHECK(FockState::from_modes({1, 3, 5, 7}, 8).occupations() ==
          std::vector<int>{1, 0, 1, 0, 1, 0, 1, 0});
    CHECK(FockState::from_modes({2, 2}, 4).occupations() == std::vector<int>{0, 2, 0, 0});
    CHECK(FockState::from_modes({}, 8).photons() == 0);
    CHECK(FockState::from_modes({7, 5, 3, 1}, 8) == FockState::from_modes({1, 3, 5, 7}, 8));
    CHECK_THROWS_AS(FockState::from_modes({0}, 4), cisim::input_error);
    CHECK_THROWS_AS(FockState::from_modes({5}, 4), cisim::input_error);
}

TEST_CASE("mode list round trip", "[fock]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const FockState s = testutil::random_state(6, 4, rng);
        const auto modes = s.mode_list();
        CHECK(std::is_sorted(modes.begin(), modes.end()));
        CHECK(FockState::from_modes(modes, s.num_modes()) == s);
    }
    CHECK(FockState::from_modes({2, 2}, 4).collision_free() == false);
    CHECK(FockState::from_modes({1, 3}, 4).collision_free() == true);
}

TEST_CASE("state enumeration counts and order", "[fock]") {
    auto binomial = [](int a, int b) {
        double v = 1.0;
        for (int i = 0; i < b; ++i) {
            v = v * (a - i) / (i + 1);
        }
        return static_cast<long>(v + 0.5);
    };
    for (int num_modes = 1; num_modes <= 10; ++num_modes) {
        for (int k = 0; k <= 5; ++k) {
            const auto all = cisim::enumerate_states(num_modes, k, false);
            CHECK(static_cast<long>(all.size()) == binomial(num_modes + k - 1, k));
            if (k <= num_modes) {
                const auto cf = cisim::enumerate_states(num_modes, k, true);
                CHECK(static_cast<long>(cf.size()) == binomial(num_modes, k));
            }
        }
    }
    const auto two = cisim::enumerate_states(2, 1, false);
    REQUIRE(two.size() == 2);
    CHECK(two[0].occupations() == std::vector<int>{1, 0});
    CHECK(two[1].occupations() == std::vector<int>{0, 1});
    CHECK(cisim::enumerate_states(8, 4, true).size() == 70);
    CHECK(cisim::enumerate_states(4, 2, false).size() == 10);
}

TEST_CASE("text round trips", "[fock]") {
    CHECK(FockState::parse("1,0,1,0,1,0,1,0") == FockState::from_modes({1, 3, 5, 7}, 8));
    CHECK(FockState::parse("[1,3,5,7]@8") == FockState::from_modes({1, 3, 5, 7}, 8));
    CHECK(FockState::parse("[]@8") == FockState::vacuum(8));
    CHECK(FockState::parse("[2,2]@4").occupations() == std::vector<int>{0, 2, 0, 0});
    CHECK(FockState::parse(FockState::from_modes({2, 2}, 4).to_string()) ==
          FockState::from_modes({2, 2}, 4));
    CHECK_THROWS_AS(FockState::parse("[1,9]@8"), cisim::input_error);
    CHECK_THROWS_AS(FockState::parse("1,0,x"), cisim::input_error);
    CHECK_THROWS_AS(FockState::parse(""), cisim::input_error);
}

TEST_CASE("scattering submatrix basics", "[fock]") {
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(4, 4);
    const FockState g = FockState::from_modes({1, 3}, 4);
    CHECK(cisim::scattering_submatrix(eye, g, g).isApprox(Eigen::MatrixXcd::Identity(2, 2)));
    CHECK_THROWS_AS(
        cisim::scattering_submatrix(eye, g, FockState::from_modes({1, 2, 3}, 4)),
        cisim::input_error);
}

TEST_CASE("cyclic interferometer scattering matrix is bidiagonal with a corner", "[fock]") {
    const double alpha = 0.83;
    cisim::CircuitSpec spec = cisim::CircuitSpec::with_alpha(4, alpha);
    const Eigen::MatrixXcd u = cisim::build_unitary(spec);
    const FockState odd = FockState::from_modes({1, 3, 5, 7}, 8);
    const Eigen::MatrixXcd s = cisim::scattering_submatrix(u, odd, odd);
    REQUIRE(s.rows() == 4);
    CHECK(std::abs(s(0, 0) - 0.5 * std::polar(1.0, alpha)) < 1e-12);
    CHECK(std::abs(s(0, 3) - std::complex<double>(-0.5, 0.0)) < 1e-12);
    for (int m = 1; m < 4; ++m) {
        CHECK(std::abs(s(m, m) - std::complex<double>(0.5, 0.0)) < 1e-12);
        CHECK(std::abs(s(m, m - 1) - std::complex<double>(-0.5, 0.0)) < 1e-12);
    }
    CHECK(std::abs(s(0, 1)) < 1e-12);
    CHECK(std::abs(s(0, 2)) < 1e-12);
    CHECK(std::abs(s(1, 2)) < 1e-12);
    CHECK(std::abs(s(1, 3)) < 1e-12);
    CHECK(std::abs(s(2, 0)) < 1e-12);
    CHECK(std::abs(s(2, 3)) < 1e-12);
    CHECK(std::abs(s(3, 0)) < 1e-12);
    CHECK(std::abs(s(3, 1)) < 1e-12);
}

TEST_CASE("repeated input modes duplicate columns and match the ladder oracle", "[fock]") {
    std::mt19937_64 rng(2024);
    const Eigen::MatrixXcd u = testutil::haar_unitary(4, rng);
    const FockState g = FockState::from_modes({2, 2}, 4);
    const FockState h = FockState::from_modes({1, 3}, 4);
    const Eigen::MatrixXcd s = cisim::scattering_submatrix(u, g, h);
    CHECK(s.col(0) == s.col(1));
    CHECK(std::abs(cisim::prob_indistinguishable(u, g, h) - testutil::ladder_probability(u, g, h)) <
          1e-12);
}

TEST_CASE("submatrix of the adjoint is the conjugate transpose", "[fock]") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::MatrixXcd u = testutil::haar_unitary(6, rng);
        const FockState g = testutil::random_state(6, 3, rng);
        const FockState h = testutil::random_state(6, 3, rng);
        const Eigen::MatrixXcd a = cisim::scattering_submatrix(u, g, h);
        const Eigen::MatrixXcd b = cisim::scattering_submatrix(u.adjoint(), h, g);
        CHECK((b.conjugate() - a.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}
