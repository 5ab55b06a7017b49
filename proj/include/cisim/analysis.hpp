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

#ifndef CISIM_ANALYSIS_HPP
#define CISIM_ANALYSIS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "cisim/common.hpp"
#include "cisim/fringe_dataset.hpp"
#include "cisim/random.hpp"

namespace cisim {

/// alpha = slope * control + offset, mapping heater power to phase.
struct LinearPhaseMap {
    double slope = 1.0;
    double offset = 0.0;
};

struct FitResult {
    double c1 = 0.0;
    double c1_err = 0.0;
    double amp_plus = 0.0;
    double amp_minus = 0.0;
    LinearPhaseMap phase_map;   ///< identity when the control is already a phase
    bool calibrated = false;    ///< slope/offset were free fit parameters
    double chi2 = 0.0;
    int dof = 0;
};

namespace detail {

struct FitData {
    std::vector<double> control;
    std::vector<double> y_plus, y_minus;
    std::vector<double> w_plus, w_minus;
};

inline FitData prepare_fit_data(const FringeDataset& ds) {
    ds.validate();
    FitData fd;
    fd.control = ds.control;
    fd.y_plus = ds.counts_plus;
    fd.y_minus = ds.counts_minus;
    const size_t count = ds.size();
    fd.w_plus.resize(count);
    fd.w_minus.resize(count);
    for (size_t i = 0; i < count; ++i) {
        if (ds.has_errors()) {
            const double ep = std::max(ds.err_plus[i], 1e-12);
            const double em = std::max(ds.err_minus[i], 1e-12);
            fd.w_plus[i] = 1.0 / (ep * ep);
            fd.w_minus[i] = 1.0 / (em * em);
        } else {
            // sqrt(N) shot noise; empty bins get unit variance
            fd.w_plus[i] = 1.0 / std::max(ds.counts_plus[i], 1.0);
            fd.w_minus[i] = 1.0 / std::max(ds.counts_minus[i], 1.0);
        }
    }
    return fd;
}

/// chi^2 profiled over the two amplitudes for a fixed visibility and fixed
/// cosine values.
inline double profile_chi2(const FitData& fd, const std::vector<double>& cosines, double c, double* amp_plus,
                           double* amp_minus) {
    double num_p = 0.0, den_p = 0.0, num_m = 0.0, den_m = 0.0;
    for (size_t i = 0; i < fd.control.size(); ++i) {
        const double fp = 1.0 + c * cosines[i];
        const double fm = 1.0 - c * cosines[i];
        num_p += fd.w_plus[i] * fd.y_plus[i] * fp;
        den_p += fd.w_plus[i] * fp * fp;
        num_m += fd.w_minus[i] * fd.y_minus[i] * fm;
        den_m += fd.w_minus[i] * fm * fm;
    }
    const double ap = den_p > 0.0 ? num_p / den_p : 0.0;
    const double am = den_m > 0.0 ? num_m / den_m : 0.0;
    double chi2 = 0.0;
    for (size_t i = 0; i < fd.control.size(); ++i) {
        const double rp = fd.y_plus[i] - ap * (1.0 + c * cosines[i]);
        const double rm = fd.y_minus[i] - am * (1.0 - c * cosines[i]);
        chi2 += fd.w_plus[i] * rp * rp + fd.w_minus[i] * rm * rm;
    }
    if (amp_plus) {
        *amp_plus = ap;
    }
    if (amp_minus) {
        *amp_minus = am;
    }
    return chi2;
}

/// Minimizes the profiled chi^2 over c in [0,1]: coarse scan, golden-section
/// refinement, parabolic polish.
inline double minimize_visibility(const FitData& fd, const std::vector<double>& cosines, double* chi2_out) {
    auto f = [&](double c) { return profile_chi2(fd, cosines, c, nullptr, nullptr); };

    const int coarse = 64;
    double best_c = 0.0;
    double best_f = f(0.0);
    for (int i = 1; i <= coarse; ++i) {
        const double c = static_cast<double>(i) / coarse;
        const double v = f(c);
        if (v < best_f) {
            best_f = v;
            best_c = c;
        }
    }
    double lo = std::max(0.0, best_c - 1.0 / coarse);
    double hi = std::min(1.0, best_c + 1.0 / coarse);

    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < 200 && (hi - lo) > 1e-15; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    double c = 0.5 * (lo + hi);
    // parabolic polish through three nearby samples
    const double h = std::max(1e-9, 1e-7 * c);
    if (c - h >= 0.0 && c + h <= 1.0) {
        const double fm = f(c - h), f0 = f(c), fp = f(c + h);
        const double denom = fm - 2.0 * f0 + fp;
        if (denom > 0.0) {
            const double step = 0.5 * h * (fm - fp) / denom;
            if (std::abs(step) < h) {
                const double cand = c + step;
                if (f(cand) <= f0) {
                    c = cand;
                }
            }
        }
    }
    c = std::clamp(c, 0.0, 1.0);
    if (chi2_out) {
        *chi2_out = f(c);
    }
    return c;
}

/// Two-parameter Nelder-Mead, small and deterministic.
inline std::array<double, 3> nelder_mead_2d(const std::function<double(double, double)>& f, double x0,
                                            double y0, double step_x, double step_y, int max_iter) {
    struct Vertex {
        double x, y, v;
    };
    std::array<Vertex, 3> s{Vertex{x0, y0, f(x0, y0)}, Vertex{x0 + step_x, y0, f(x0 + step_x, y0)},
                            Vertex{x0, y0 + step_y, f(x0, y0 + step_y)}};
    auto order = [&]() { std::sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; }); };
    order();
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(s[2].v - s[0].v) < 1e-14 * (1.0 + std::abs(s[0].v)) &&
            std::hypot(s[2].x - s[0].x, s[2].y - s[0].y) < 1e-12) {
            break;
        }
        const double cx = 0.5 * (s[0].x + s[1].x);
        const double cy = 0.5 * (s[0].y + s[1].y);
        const double rx = cx + (cx - s[2].x);
        const double ry = cy + (cy - s[2].y);
        const double rv = f(rx, ry);
        if (rv < s[0].v) {
            const double ex = cx + 2.0 * (cx - s[2].x);
            const double ey = cy + 2.0 * (cy - s[2].y);
            const double ev = f(ex, ey);
            s[2] = ev < rv ? Vertex{ex, ey, ev} : Vertex{rx, ry, rv};
        } else if (rv < s[1].v) {
            s[2] = Vertex{rx, ry, rv};
        } else {
            const double kx = cx + 0.5 * (s[2].x - cx);
            const double ky = cy + 0.5 * (s[2].y - cy);
            const double kv = f(kx, ky);
            if (kv < s[2].v) {
                s[2] = Vertex{kx, ky, kv};
            } else {
                for (int i = 1; i < 3; ++i) {
                    s[i].x = s[0].x + 0.5 * (s[i].x - s[0].x);
                    s[i].y = s[0].y + 0.5 * (s[i].y - s[0].y);
                    s[i].v = f(s[i].x, s[i].y);
                }
            }
        }
        order();
    }
    return {s[0].x, s[0].y, s[0].v};
}

inline std::vector<double> cosines_for(const std::vector<double>& control, double slope, double offset) {
    std::vector<double> u(control.size());
    for (size_t i = 0; i < control.size(); ++i) {
        u[i] = std::cos(slope * control[i] + offset);
    }
    return u;
}

inline int count_distinct(const std::vector<double>& v) {
    std::set<double> s(v.begin(), v.end());
    return static_cast<int>(s.size());
}

}  // namespace detail

/// Weighted least-squares fit of counts_plus to A+(1 + c1 cos a) and
/// counts_minus to A-(1 - c1 cos a) with a shared visibility. Control
/// values in milliwatts are mapped to phase through a linear map, fitted
/// jointly unless `calibration` pins it. c1 is clamped to [0,1]; its error
/// comes from the fit covariance.
inline FitResult fit_visibility(const FringeDataset& ds,
                                std::optional<LinearPhaseMap> calibration = std::nullopt) {
    const detail::FitData fd = detail::prepare_fit_data(ds);
    const bool need_map = ds.unit == FringeDataset::Unit::milliwatts;
    const bool fit_map = need_map && !calibration.has_value();
    const int distinct = detail::count_distinct(fd.control);
    if (distinct < (fit_map ? 4 : 3)) {
        throw fit_error("need at least " + std::to_string(fit_map ? 4 : 3) +
                        " distinct control values, got " + std::to_string(distinct));
    }

    FitResult out;
    out.calibrated = fit_map;
    if (!need_map) {
        out.phase_map = LinearPhaseMap{1.0, 0.0};
    } else if (calibration) {
        out.phase_map = *calibration;
    }

    if (fit_map) {
        const double span =
            *std::max_element(fd.control.begin(), fd.control.end()) -
            *std::min_element(fd.control.begin(), fd.control.end());
        if (!(span > 0.0)) {
            throw fit_error("degenerate design: all control values equal");
        }
        auto objective = [&](double slope, double offset) {
            const auto u = detail::cosines_for(fd.control, slope, offset);
            double chi2 = 0.0;
            detail::minimize_visibility(fd, u, &chi2);
            return chi2;
        };
        double best_chi2 = std::numeric_limits<double>::infinity();
        double best_a = 0.0, best_b = 0.0;
        for (int j = 1; j <= 32; ++j) {
            const double a0 = static_cast<double>(j) * pi / (2.0 * span);
            for (int bi = 0; bi < 4; ++bi) {
                const double b0 = bi * pi / 2.0;
                const auto res = detail::nelder_mead_2d(objective, a0, b0, 0.25 * pi / (2.0 * span), 0.25,
                                                        250);
                const bool first = !std::isfinite(best_chi2);
                const bool better = res[2] < best_chi2 - 1e-12 * (1.0 + std::abs(best_chi2));
                const bool tie =
                    !first && std::abs(res[2] - best_chi2) <= 1e-9 * (1.0 + std::abs(best_chi2));
                if (first || better || (tie && std::abs(res[0]) < std::abs(best_a))) {
                    best_chi2 = res[2];
                    best_a = res[0];
                    best_b = res[1];
                }
            }
        }
        if (!std::isfinite(best_chi2)) {
            throw fit_error("phase-calibration fit did not converge");
        }
        if (best_a < 0.0) {
            best_a = -best_a;
            best_b = -best_b;
        }
        best_b = std::fmod(best_b, 2.0 * pi);
        if (best_b < 0.0) {
            best_b += 2.0 * pi;
        }
        out.phase_map = LinearPhaseMap{best_a, best_b};
    }

    const auto u = detail::cosines_for(fd.control, out.phase_map.slope, out.phase_map.offset);
    if (!fit_map && detail::count_distinct(u) < 2) {
        throw fit_error("degenerate design: control values map to a single phase");
    }
    out.c1 = detail::minimize_visibility(fd, u, &out.chi2);
    detail::profile_chi2(fd, u, out.c1, &out.amp_plus, &out.amp_minus);

    // covariance of (A+, A-, c1[, slope, offset]) at the optimum
    const int npar = fit_map ? 5 : 3;
    const size_t npts = fd.control.size();
    Eigen::MatrixXd jtwj = Eigen::MatrixXd::Zero(npar, npar);
    for (size_t i = 0; i < npts; ++i) {
        const double theta = out.phase_map.slope * fd.control[i] + out.phase_map.offset;
        const double cu = need_map ? std::cos(theta) : std::cos(fd.control[i]);
        const double su = need_map ? std::sin(theta) : std::sin(fd.control[i]);
        for (int branch = 0; branch < 2; ++branch) {
            const double sgn = branch == 0 ? 1.0 : -1.0;
            const double amp = branch == 0 ? out.amp_plus : out.amp_minus;
            const double w = branch == 0 ? fd.w_plus[i] : fd.w_minus[i];
            Eigen::VectorXd row = Eigen::VectorXd::Zero(npar);
            row(branch) = 1.0 + sgn * out.c1 * cu;
            row(2) = amp * sgn * cu;
            if (fit_map) {
                row(3) = -amp * sgn * out.c1 * su * fd.control[i];
                row(4) = -amp * sgn * out.c1 * su;
            }
            jtwj += w * row * row.transpose();
        }
    }
    out.dof = static_cast<int>(2 * npts) - npar;
    // equilibrate before inverting; amplitude and visibility columns can
    // differ by many orders of magnitude on probability-scale traces
    Eigen::VectorXd scale(npar);
    for (int i = 0; i < npar; ++i) {
        scale(i) = jtwj(i, i) > 0.0 ? 1.0 / std::sqrt(jtwj(i, i)) : 1.0;
    }
    const Eigen::MatrixXd balanced = scale.asDiagonal() * jtwj * scale.asDiagonal();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(balanced);
    if (lu.isInvertible()) {
        const Eigen::MatrixXd cov =
            scale.asDiagonal() * lu.inverse() * scale.asDiagonal();
        out.c1_err = std::sqrt(std::max(0.0, cov(2, 2)));
    } else {
        out.c1_err = std::numeric_limits<double>::infinity();
    }
    return out;
}

/// Pairwise indistinguishability from a HOM visibility, correcting for
/// multiphoton emission: M = (V + g2) / (1 - g2), clamped to [0,1].
inline double hom_indistinguishability(double visibility, double g2) {
    if (!(visibility >= 0.0 && visibility <= 1.0)) {
        throw input_error("HOM visibility outside [0,1]");
    }
    if (!(g2 >= 0.0 && g2 < 1.0)) {
        throw input_error("g2 must be in [0,1)");
    }
    return std::clamp((visibility + g2) / (1.0 - g2), 0.0, 1.0);
}

/// The four pairwise overlaps accessible in the 8-mode device, with
/// standard errors.
struct OverlapSet {
    double m_ab = 0.0, m_bc = 0.0, m_cd = 0.0, m_da = 0.0;
    double err_ab = 0.0, err_bc = 0.0, err_cd = 0.0, err_da = 0.0;

    void validate() const {
        for (double m : {m_ab, m_bc, m_cd, m_da}) {
            if (!(m >= 0.0 && m <= 1.0)) {
                throw input_error("overlap outside [0,1]");
            }
        }
        for (double e : {err_ab, err_bc, err_cd, err_da}) {
            if (!(e >= 0.0)) {
                throw input_error("negative overlap error");
            }
        }
    }
};

struct C1Bounds {
    double lower = 0.0;
    double upper = 1.0;
    bool consistent = true;  ///< lower <= upper; false signals model violation
};

/// Point bounds on the genuine n-photon indistinguishability from the
/// measured cycle of pairwise overlaps.
inline C1Bounds c1_bounds(const OverlapSet& overlaps) {
    overlaps.validate();
    C1Bounds b;
    b.lower = std::max(0.0, overlaps.m_ab + overlaps.m_bc + overlaps.m_cd + overlaps.m_da - 3.0);
    b.upper = std::min(std::min(overlaps.m_ab, overlaps.m_bc), std::min(overlaps.m_cd, overlaps.m_da));
    b.consistent = b.lower <= b.upper;
    return b;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Triangle-style inequalities for the two overlaps the device cannot
/// measure, from the three adjacent measured ones.
inline std::pair<Interval, Interval> unmeasured_overlap_bounds(double m_ab, double m_bc, double m_cd) {
    for (double m : {m_ab, m_bc, m_cd}) {
        if (!(m >= 0.0 && m <= 1.0)) {
            throw input_error("overlap outside [0,1]");
        }
    }
    Interval ac{std::max(0.0, m_ab + m_bc - 1.0), 1.0 - std::abs(m_ab - m_bc)};
    Interval bd{std::max(0.0, m_bc + m_cd - 1.0), 1.0 - std::abs(m_bc - m_cd)};
    return {ac, bd};
}

struct BootstrapBounds {
    double c1_min = 0.0;
    double c1_max = 1.0;
    int iterations = 0;
    std::uint64_t seed = 0;
};

/// Bootstrap widening of the point bounds: resample the four overlaps from
/// normal distributions (clamped to [0,1]), take mean -/+ 3 std of the
/// per-sample bounds. Deterministic for a given seed, independent of any
/// parallel scheduling.
inline BootstrapBounds bootstrap_bounds(const OverlapSet& overlaps, int iterations, std::uint64_t seed) {
    overlaps.validate();
    if (iterations < 100) {
        throw input_error("bootstrap needs at least 100 iterations");
    }
    double sum_lo = 0.0, sum_lo2 = 0.0, sum_hi = 0.0, sum_hi2 = 0.0;
    const std::array<double, 4> mean{overlaps.m_ab, overlaps.m_bc, overlaps.m_cd, overlaps.m_da};
    const std::array<double, 4> err{overlaps.err_ab, overlaps.err_bc, overlaps.err_cd, overlaps.err_da};
    for (int i = 0; i < iterations; ++i) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
        std::array<double, 4> draw{};
        for (size_t j = 0; j < 4; ++j) {
            draw[j] = std::clamp(mean[j] + err[j] * rng.next_normal(), 0.0, 1.0);
        }
        const double lo = std::max(0.0, draw[0] + draw[1] + draw[2] + draw[3] - 3.0);
        const double hi = std::min(std::min(draw[0], draw[1]), std::min(draw[2], draw[3]));
        sum_lo += lo;
        sum_lo2 += lo * lo;
        sum_hi += hi;
        sum_hi2 += hi * hi;
    }
    const double inv = 1.0 / iterations;
    const double mean_lo = sum_lo * inv;
    const double mean_hi = sum_hi * inv;
    const double var_lo = std::max(0.0, (sum_lo2 - iterations * mean_lo * mean_lo) / (iterations - 1));
    const double var_hi = std::max(0.0, (sum_hi2 - iterations * mean_hi * mean_hi) / (iterations - 1));
    BootstrapBounds out;
    out.c1_min = std::clamp(mean_lo - 3.0 * std::sqrt(var_lo), 0.0, 1.0);
    out.c1_max = std::clamp(mean_hi + 3.0 * std::sqrt(var_hi), 0.0, 1.0);
    out.iterations = iterations;
    out.seed = seed;
    return out;
}

struct Calibration {
    double slope = 0.0;    ///< rad per control unit
    double offset = 0.0;   ///< rad
    double residual = 0.0; ///< chi^2 of the joint fit
};

/// Fits the linear power-to-phase map jointly with the fringe. Needs at
/// least 4 points covering more than half a fringe period.
inline Calibration phase_calibration(const FringeDataset& ds) {
    if (ds.unit != FringeDataset::Unit::milliwatts) {
        throw calibration_error("phase calibration expects control values in milliwatts");
    }
    if (detail::count_distinct(ds.control) < 4) {
        throw calibration_error("phase calibration needs at least 4 distinct control values");
    }
    const FitResult fit = fit_visibility(ds);
    const double span = *std::max_element(ds.control.begin(), ds.control.end()) -
                        *std::min_element(ds.control.begin(), ds.control.end());
    if (fit.phase_map.slope * span < pi) {
        throw calibration_error("control values span less than half a fringe period");
    }
    return Calibration{fit.phase_map.slope, fit.phase_map.offset, fit.chi2};
}

/// Visibility from a single phase point at cos(alpha) = 1:
/// c1 = (P+ - P-) / (P+ + P-).
inline double single_point_visibility(double p_plus, double p_minus) {
    if (!(p_plus >= 0.0) || !(p_minus >= 0.0) || p_plus + p_minus <= 0.0) {
        throw input_error("single-point visibility needs nonnegative counts with a positive sum");
    }
    return (p_plus - p_minus) / (p_plus + p_minus);
}

}  // namespace cisim

#endif
