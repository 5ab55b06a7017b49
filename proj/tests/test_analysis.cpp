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
#include <cmath>
#include <random>
#include <sstream>

#include "cisim/analysis.hpp"
#include "cisim/random.hpp"

using cisim::FringeDataset;
using cisim::OverlapSet;

namespace {

FringeDataset synthetic_fringe(double amp_plus, double amp_minus, double c1, int points,
                               double slope = 1.0, double offset = 0.0,
                               FringeDataset::Unit unit = FringeDataset::Unit::radians,
                               double control_step = 0.0) {
    FringeDataset ds;
    ds.unit = unit;
    const double step = control_step > 0.0 ? control_step : 2.0 * cisim::pi / points;
    for (int i = 0; i < points; ++i) {
        const double control = i * step;
        const double alpha = slope * control + offset;
        ds.control.push_back(control);
        ds.counts_plus.push_back(amp_plus * (1.0 + c1 * std::cos(alpha)));
        ds.counts_minus.push_back(amp_minus * (1.0 - c1 * std::cos(alpha)));
    }
    return ds;
}

}  // namespace

TEST_CASE("exact model recovery", "[analysis]") {
    const auto ds = synthetic_fringe(1500.0, 1400.0, 0.61, 12);
    const auto fit = cisim::fit_visibility(ds);
    CHECK(std::abs(fit.c1 - 0.61) < 1e-10);
    CHECK(fit.amp_plus == Catch::Approx(1500.0).epsilon(1e-8));
    CHECK(fit.amp_minus == Catch::Approx(1400.0).epsilon(1e-8));
    CHECK(fit.chi2 < 1e-12);
}

TEST_CASE("recovery from shot noise at the experimental count scale", "[analysis]") {
    // ~1.6 Hz of four-fold coincidences, 30 minutes per setting, split over
    // the two trace sums; counts drawn with a seeded normal approximation
    cisim::SplitMix64 rng(424242);
    const double amp = 1440.0;
    FringeDataset ds;
    for (int i = 0; i < 16; ++i) {
        const double alpha = 2.0 * cisim::pi * i / 16.0;
        const double mu_p = amp * (1.0 + 0.61 * std::cos(alpha));
        const double mu_m = amp * (1.0 - 0.61 * std::cos(alpha));
        ds.control.push_back(alpha);
        ds.counts_plus.push_back(std::round(mu_p + std::sqrt(mu_p) * rng.next_normal()));
        ds.counts_minus.push_back(std::round(mu_m + std::sqrt(mu_m) * rng.next_normal()));
    }
    const auto fit = cisim::fit_visibility(ds);
    CHECK(std::abs(fit.c1 - 0.61) < 0.03);
    CHECK(fit.c1_err > 0.003);
    CHECK(fit.c1_err < 0.03);
}

TEST_CASE("constant data fits zero visibility", "[analysis]") {
    FringeDataset ds;
    for (int i = 0; i < 10; ++i) {
        ds.control.push_back(2.0 * cisim::pi * i / 10.0);
        ds.counts_plus.push_back(500.0);
        ds.counts_minus.push_back(500.0);
    }
    const auto fit = cisim::fit_visibility(ds);
    CHECK(fit.c1 < 1e-6);
    CHECK(fit.c1_err > 0.001);
}

TEST_CASE("degenerate designs are rejected", "[analysis]") {
    FringeDataset ds;
    for (int i = 0; i < 6; ++i) {
        ds.control.push_back(1.0);
        ds.counts_plus.push_back(10.0);
        ds.counts_minus.push_back(10.0);
    }
    CHECK_THROWS_AS(cisim::fit_visibility(ds), cisim::fit_error);

    FringeDataset two;
    two.control = {0.0, 1.0};
    two.counts_plus = {10.0, 12.0};
    two.counts_minus = {10.0, 8.0};
    CHECK_THROWS_AS(cisim::fit_visibility(two), cisim::fit_error);
}

TEST_CASE("fit invariances", "[analysis]") {
    const auto base = synthetic_fringe(900.0, 900.0, 0.4, 14);
    const double c_base = cisim::fit_visibility(base).c1;

    FringeDataset scaled = base;
    for (auto& y : scaled.counts_plus) {
        y *= 7.5;
    }
    for (auto& y : scaled.counts_minus) {
        y *= 7.5;
    }
    CHECK(std::abs(cisim::fit_visibility(scaled).c1 - c_base) < 1e-9);

    FringeDataset shifted = base;
    for (auto& a : shifted.control) {
        a += 4.0 * cisim::pi;
    }
    CHECK(std::abs(cisim::fit_visibility(shifted).c1 - c_base) < 1e-9);
}

TEST_CASE("milliwatt control with a joint linear calibration", "[analysis]") {
    const double slope = cisim::pi / 136.0;
    const auto ds = synthetic_fringe(1000.0, 1000.0, 0.66, 24, slope, 0.0,
                                     FringeDataset::Unit::milliwatts, 25.0);
    const auto fit = cisim::fit_visibility(ds);
    CHECK(fit.calibrated);
    CHECK(std::abs(fit.c1 - 0.66) < 1e-6);
    CHECK(std::abs(fit.phase_map.slope - slope) < 1e-6);
    CHECK(std::abs(std::remainder(fit.phase_map.offset, 2.0 * cisim::pi)) < 1e-6);

    const auto cal = cisim::phase_calibration(ds);
    CHECK(std::abs(cal.slope - slope) < 1e-6);
    CHECK(cal.residual < 1e-9);

    // a pinned calibration bypasses the joint fit
    const auto pinned = cisim::fit_visibility(ds, cisim::LinearPhaseMap{slope, 0.0});
    CHECK_FALSE(pinned.calibrated);
    CHECK(std::abs(pinned.c1 - 0.66) < 1e-10);
}

TEST_CASE("calibration recovery with a nonzero offset and shot noise", "[analysis]") {
    const double slope = cisim::pi / 136.0;
    const double offset = 118.0 * cisim::pi / 136.0;
    cisim::SplitMix64 rng(1234);
    FringeDataset ds;
    ds.unit = FringeDataset::Unit::milliwatts;
    for (int i = 0; i < 20; ++i) {
        const double power = 20.0 * i;
        const double alpha = slope * power + offset;
        const double mu_p = 1200.0 * (1.0 + 0.61 * std::cos(alpha));
        const double mu_m = 1200.0 * (1.0 - 0.61 * std::cos(alpha));
        ds.control.push_back(power);
        ds.counts_plus.push_back(std::max(0.0, std::round(mu_p + std::sqrt(mu_p) * rng.next_normal())));
        ds.counts_minus.push_back(std::max(0.0, std::round(mu_m + std::sqrt(mu_m) * rng.next_normal())));
    }
    const auto fit = cisim::fit_visibility(ds);
    CHECK(std::abs(fit.c1 - 0.61) < 0.03);
    CHECK(std::abs(fit.phase_map.slope - slope) < 0.001);
    CHECK(std::abs(std::remainder(fit.phase_map.offset - offset, 2.0 * cisim::pi)) < 0.1);
}

TEST_CASE("one linear map satisfies both heater anchors", "[analysis]") {
    // 290 mW near 3 pi and 426 mW near 4 pi
    const double slope = cisim::pi / 136.0;
    const double offset = 3.0 * cisim::pi - slope * 290.0;
    CHECK(std::abs(slope * 290.0 + offset - 3.0 * cisim::pi) < 1e-12);
    CHECK(std::abs(slope * 426.0 + offset - 4.0 * cisim::pi) < 1e-12);
}

TEST_CASE("calibration failure modes", "[analysis]") {
    FringeDataset single;
    single.unit = FringeDataset::Unit::milliwatts;
    single.control = {100.0};
    single.counts_plus = {10.0};
    single.counts_minus = {10.0};
    CHECK_THROWS_AS(cisim::phase_calibration(single), cisim::calibration_error);

    // a quarter of a fringe period over the span
    const auto short_span = synthetic_fringe(1000.0, 1000.0, 0.5, 8, cisim::pi / 2.0 / 80.0, 0.3,
                                             FringeDataset::Unit::milliwatts, 10.0);
    CHECK_THROWS_AS(cisim::phase_calibration(short_span), cisim::calibration_error);

    const auto radians = synthetic_fringe(10.0, 10.0, 0.5, 8);
    CHECK_THROWS_AS(cisim::phase_calibration(radians), cisim::calibration_error);
}

TEST_CASE("HOM correction formula", "[analysis]") {
    CHECK(cisim::hom_indistinguishability(0.886, 0.019) == Catch::Approx(0.923).margin(5e-4));
    CHECK(cisim::hom_indistinguishability(0.848, 0.019) == Catch::Approx(0.884).margin(5e-4));
    CHECK(cisim::hom_indistinguishability(0.5, 0.0) == Catch::Approx(0.5));
    CHECK(cisim::hom_indistinguishability(0.999, 0.05) == 1.0);  // clamped
    CHECK_THROWS_AS(cisim::hom_indistinguishability(1.2, 0.0), cisim::input_error);
    CHECK_THROWS_AS(cisim::hom_indistinguishability(0.5, 1.0), cisim::input_error);
}

TEST_CASE("point bounds on c1", "[analysis]") {
    const OverlapSet measured{0.760, 0.825, 0.884, 0.789};
    const auto bounds = cisim::c1_bounds(measured);
    CHECK(bounds.lower == Catch::Approx(0.258).margin(1e-12));
    CHECK(bounds.upper == Catch::Approx(0.760).margin(1e-12));
    CHECK(bounds.consistent);

    const auto perfect = cisim::c1_bounds(OverlapSet{1.0, 1.0, 1.0, 1.0});
    CHECK(perfect.lower == 1.0);
    CHECK(perfect.upper == 1.0);

    const auto weak = cisim::c1_bounds(OverlapSet{0.5, 0.5, 0.5, 0.5});
    CHECK(weak.lower == 0.0);
    CHECK(weak.upper == 0.5);

    // the lower bound can never exceed the upper one while overlaps stay in
    // [0,1]: the other three overlaps would have to sum above 3
    std::mt19937_64 rng(64);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto b = cisim::c1_bounds(OverlapSet{u01(rng), u01(rng), u01(rng), u01(rng)});
        REQUIRE(b.lower <= b.upper + 1e-15);
        REQUIRE(b.consistent);
    }
}

TEST_CASE("bounds for the unmeasured overlaps", "[analysis]") {
    const auto [ac1, bd1] = cisim::unmeasured_overlap_bounds(1.0, 1.0, 0.3);
    CHECK(ac1.lo == Catch::Approx(1.0));
    CHECK(ac1.hi == Catch::Approx(1.0));

    const auto [ac2, bd2] = cisim::unmeasured_overlap_bounds(0.760, 0.825, 0.884);
    CHECK(ac2.lo == Catch::Approx(0.585).margin(1e-12));
    CHECK(ac2.hi == Catch::Approx(0.935).margin(1e-12));
    CHECK(bd2.lo == Catch::Approx(0.709).margin(1e-12));
    CHECK(bd2.hi == Catch::Approx(0.941).margin(1e-12));

    const auto [ac3, bd3] = cisim::unmeasured_overlap_bounds(1.0, 0.0, 0.5);
    CHECK(ac3.lo == 0.0);
    CHECK(ac3.hi == Catch::Approx(0.0));
}

TEST_CASE("bootstrap bounds", "[analysis]") {
    const OverlapSet measured{0.760, 0.825, 0.884, 0.789, 0.002, 0.002, 0.002, 0.003};

    const auto frozen = cisim::bootstrap_bounds(OverlapSet{0.760, 0.825, 0.884, 0.789}, 500, 7);
    const auto point = cisim::c1_bounds(OverlapSet{0.760, 0.825, 0.884, 0.789});
    CHECK(frozen.c1_min == Catch::Approx(point.lower).margin(1e-12));
    CHECK(frozen.c1_max == Catch::Approx(point.upper).margin(1e-12));

    const auto a = cisim::bootstrap_bounds(measured, 10000, 99);
    const auto b = cisim::bootstrap_bounds(measured, 10000, 99);
    CHECK(a.c1_min == b.c1_min);
    CHECK(a.c1_max == b.c1_max);

    CHECK(std::abs(a.c1_min - 0.235) < 0.01);
    CHECK(std::abs(a.c1_max - 0.766) < 0.01);

    CHECK_THROWS_AS(cisim::bootstrap_bounds(measured, 50, 1), cisim::input_error);
}

TEST_CASE("single point visibility", "[analysis]") {
    CHECK(cisim::single_point_visibility(181.0, 19.0) == Catch::Approx(0.81));
    CHECK(cisim::single_point_visibility(10.0, 10.0) == 0.0);
    CHECK_THROWS_AS(cisim::single_point_visibility(0.0, 0.0), cisim::input_error);
}

TEST_CASE("fringe CSV round trip", "[analysis]") {
    FringeDataset ds = synthetic_fringe(100.0, 90.0, 0.5, 6);
    ds.err_plus.assign(6, 3.0);
    ds.err_minus.assign(6, 4.0);
    std::ostringstream os;
    cisim::write_fringe_csv(os, ds);
    std::istringstream is(os.str());
    const FringeDataset back = cisim::read_fringe_csv(is);
    REQUIRE(back.size() == ds.size());
    CHECK(back.unit == ds.unit);
    CHECK(back.control == ds.control);
    CHECK(back.counts_plus == ds.counts_plus);
    CHECK(back.err_minus == ds.err_minus);

    std::ostringstream scan;
    cisim::write_scan_csv(scan, synthetic_fringe(1.0, 1.0, 0.3, 5));
    std::istringstream scan_is(scan.str());
    const FringeDataset from_scan = cisim::read_fringe_csv(scan_is);
    CHECK(from_scan.size() == 5);
    CHECK(from_scan.unit == FringeDataset::Unit::radians);

    std::istringstream bad("control,unit,counts_plus,counts_minus\n1.0,furlongs,5,5\n");
    CHECK_THROWS_AS(cisim::read_fringe_csv(bad), cisim::input_error);
}
