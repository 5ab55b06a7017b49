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

#ifndef CISIM_NOISE_HPP
#define CISIM_NOISE_HPP

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

#include "cisim/analysis.hpp"
#include "cisim/circuit.hpp"
#include "cisim/common.hpp"
#include "cisim/fock.hpp"
#include "cisim/fringe_dataset.hpp"
#include "cisim/interference.hpp"

namespace cisim {

/// Single-photon source figures: brightness per time-bin, second-order
/// correlation at zero delay, and the effective per-photon transmission of
/// the whole train (demultiplexing included).
struct SourceParams {
    double brightness = 0.0;
    double g2 = 0.0;
    double eta = 1.0;

    void validate() const {
        if (!(brightness > 0.0 && brightness <= 1.0)) {
            throw input_error("brightness must be in (0,1]");
        }
        if (!(g2 >= 0.0 && g2 < 0.5)) {
            throw input_error("g2 must be in [0, 0.5)");
        }
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw input_error("transmission eta must be in (0,1]");
        }
    }
};

struct EmissionProbs {
    double p0 = 1.0;
    double p1 = 0.0;
    double p2 = 0.0;
};

/// Per-time-bin emission probabilities from B ~ p1 + p2 and
/// g2 = 2 p2 / (p1 + 2 p2)^2; the smaller quadratic root keeps p2 >= 0.
inline EmissionProbs solve_emission_probs(double brightness, double g2) {
    if (!(brightness > 0.0 && brightness <= 1.0)) {
        throw input_error("brightness must be in (0,1]");
    }
    if (!(g2 >= 0.0 && g2 < 0.5)) {
        throw input_error("g2 must be in [0, 0.5)");
    }
    EmissionProbs probs;
    probs.p0 = 1.0 - brightness;
    if (g2 < 1e-15) {
        probs.p1 = brightness;
        probs.p2 = 0.0;
        return probs;
    }
    const double disc = 1.0 - 2.0 * g2 * brightness;
    if (disc < 0.0) {
        throw input_error("no nonnegative emission-probability solution");
    }
    const double s = (1.0 - std::sqrt(disc)) / g2;  // s = p1 + 2 p2
    double p2 = s - brightness;
    if (p2 < 0.0) {
        if (p2 < -1e-12) {
            throw input_error("no nonnegative emission-probability solution");
        }
        p2 = 0.0;
    }
    probs.p2 = p2;
    probs.p1 = brightness - p2;
    if (probs.p1 < 0.0) {
        throw input_error("no nonnegative emission-probability solution");
    }
    return probs;
}

/// Relative detector efficiencies; the common factor belongs in eta, so the
/// largest imbalance is normalized to 1 at construction.
struct DetectorParams {
    std::vector<double> imbalance;

    DetectorParams() = default;

    explicit DetectorParams(std::vector<double> raw) : imbalance(std::move(raw)) {
        if (imbalance.empty()) {
            throw input_error("detector imbalance list is empty");
        }
        double max = 0.0;
        for (double v : imbalance) {
            if (!(v > 0.0 && v <= 1.0)) {
                throw input_error("detector imbalance outside (0,1]");
            }
            max = std::max(max, v);
        }
        for (double& v : imbalance) {
            v /= max;
        }
    }

    static DetectorParams balanced(int num_modes) {
        return DetectorParams(std::vector<double>(static_cast<size_t>(num_modes), 1.0));
    }
};

/// Threshold detector: click probability for n impinging photons.
inline double click_probability(double eta_tilde, int photons) {
    if (!(eta_tilde > 0.0 && eta_tilde <= 1.0)) {
        throw input_error("detector imbalance outside (0,1]");
    }
    if (photons < 0) {
        throw input_error("negative photon number");
    }
    return 1.0 - std::pow(1.0 - eta_tilde, photons);
}

enum class PhotonClass { principal, noise };

/// One term of the lossy multiphoton input mixture: a classical weight and
/// the surviving photons with their distinguishability class.
struct WeightedInput {
    double weight = 0.0;
    std::vector<std::pair<int, PhotonClass>> photons;  // (1-based mode, class)
};

/// The four-photon input mixture after multiphoton emission and balanced
/// loss, truncated to at most one noise photon and at least four photons:
///  (i)   four principals,
///  (ii)  a noise photon replacing one principal         (4 terms),
///  (iii) a doubled mode plus an empty mode              (12 terms),
///  (iv)  a doubled mode with all four bins occupied     (4 terms, 5 photons).
inline std::vector<WeightedInput> lossy_input_ensemble(const SourceParams& source) {
    source.validate();
    const EmissionProbs p = solve_emission_probs(source.brightness, source.g2);
    const double eta = source.eta;
    const double eta4 = eta * eta * eta * eta;
    const std::array<int, 4> modes{1, 3, 5, 7};

    std::vector<WeightedInput> ensemble;
    auto add = [&ensemble](double weight, std::vector<std::pair<int, PhotonClass>> photons) {
        if (weight > 0.0) {
            ensemble.push_back({weight, std::move(photons)});
        }
    };

    const double p1_3_p2 = p.p1 * p.p1 * p.p1 * p.p2;

    {
        const double w = p.p1 * p.p1 * p.p1 * p.p1 * eta4 + 4.0 * p1_3_p2 * eta4 * (1.0 - eta);
        std::vector<std::pair<int, PhotonClass>> photons;
        for (int m : modes) {
            photons.emplace_back(m, PhotonClass::principal);
        }
        add(w, std::move(photons));
    }

    for (int d : modes) {
        const double w = p1_3_p2 * eta4 * (1.0 - eta);
        std::vector<std::pair<int, PhotonClass>> photons;
        for (int m : modes) {
            photons.emplace_back(m, m == d ? PhotonClass::noise : PhotonClass::principal);
        }
        add(w, std::move(photons));
    }

    for (int d : modes) {
        for (int e : modes) {
            if (e == d) {
                continue;
            }
            const double w = p.p0 * p.p1 * p.p1 * p.p2 * eta4 + p1_3_p2 * eta4 * (1.0 - eta);
            std::vector<std::pair<int, PhotonClass>> photons;
            for (int m : modes) {
                if (m == e) {
                    continue;
                }
                photons.emplace_back(m, PhotonClass::principal);
                if (m == d) {
                    photons.emplace_back(m, PhotonClass::noise);
                }
            }
            add(w, std::move(photons));
        }
    }

    for (int d : modes) {
        const double w = p1_3_p2 * eta4 * eta;
        std::vector<std::pair<int, PhotonClass>> photons;
        for (int m : modes) {
            photons.emplace_back(m, PhotonClass::principal);
            if (m == d) {
                photons.emplace_back(m, PhotonClass::noise);
            }
        }
        add(w, std::move(photons));
    }

    return ensemble;
}

/// Everything needed to simulate the 8-mode, 4-photon experiment.
struct NoiseConfig {
    SourceParams source;
    DetectorParams detectors;
    CircuitSpec circuit;                       ///< n = 4, measured transmissivities
    std::array<double, 4> photon_weights{};    ///< x_A..x_D for input modes 1,3,5,7

    void validate() const {
        source.validate();
        circuit.validate();
        if (circuit.n != 4) {
            throw input_error("the noise model simulates the 8-mode, 4-photon experiment (n = 4)");
        }
        if (static_cast<int>(detectors.imbalance.size()) != circuit.num_modes()) {
            throw input_error("detector imbalance count does not match the mode count");
        }
        for (double x : photon_weights) {
            if (!(x >= 0.0 && x <= 1.0)) {
                throw input_error("photon indistinguishability weight outside [0,1]");
            }
        }
    }
};

enum class NoiseToggle { multiphoton, couplers, detection };

namespace detail {

inline double weight_for(const NoiseConfig& cfg, int mode, PhotonClass cls) {
    if (cls == PhotonClass::noise) {
        return 0.0;
    }
    return cfg.photon_weights[static_cast<size_t>((mode - 1) / 2)];
}

/// Probability that one weighted input term fires exactly the detectors of
/// `pattern`. Four-photon terms need one photon per clicked mode; five-photon
/// terms land on the clicked modes with exactly one of them doubled.
inline double pattern_probability(const Eigen::MatrixXcd& unitary, const WeightedInput& term,
                                  const FockState& pattern, const NoiseConfig& cfg) {
    std::vector<MixturePhoton> photons;
    photons.reserve(term.photons.size());
    for (const auto& [mode, cls] : term.photons) {
        photons.push_back({mode, weight_for(cfg, mode, cls)});
    }
    const std::vector<int> clicked = pattern.mode_list();
    double click_single = 1.0;
    for (int m : clicked) {
        click_single *= cfg.detectors.imbalance[static_cast<size_t>(m - 1)];
    }

    const size_t photon_count = term.photons.size();
    if (photon_count == static_cast<size_t>(pattern.photons())) {
        return mixture_probability(unitary, photons, pattern) * click_single;
    }
    if (photon_count != static_cast<size_t>(pattern.photons()) + 1) {
        throw input_error("unsupported photon surplus in noise term");
    }
    double total = 0.0;
    for (int d : clicked) {
        std::vector<int> occ = pattern.occupations();
        occ[static_cast<size_t>(d - 1)] += 1;
        const FockState doubled{std::move(occ)};
        const double eta_d = cfg.detectors.imbalance[static_cast<size_t>(d - 1)];
        const double clicks = click_single / eta_d * click_probability(eta_d, 2);
        total += mixture_probability(unitary, photons, doubled) * clicks;
    }
    return total;
}

}  // namespace detail

/// The 16 fringing four-click patterns for input (1,3,5,7), split by sign.
inline std::pair<std::vector<FockState>, std::vector<FockState>> fringing_patterns() {
    const FockState input = FockState::from_modes({1, 3, 5, 7}, 8);
    std::vector<FockState> plus;
    std::vector<FockState> minus;
    for (const FockState& h : enumerate_states(8, 4, true)) {
        switch (fringe_sign(input, h)) {
            case FringeSign::plus: plus.push_back(h); break;
            case FringeSign::minus: minus.push_back(h); break;
            case FringeSign::none: break;
        }
    }
    return {plus, minus};
}

/// Full experiment simulation: for each phase value, every input term of the
/// lossy multiphoton mixture is propagated through the measured-coupler
/// unitary, detector clicks are applied, and the plus- and minus-set
/// four-fold patterns are summed.
inline FringeDataset simulate_experiment(const NoiseConfig& cfg, const std::vector<double>& alphas) {
    cfg.validate();
    if (alphas.empty()) {
        throw input_error("simulate_experiment needs at least one phase value");
    }
    const std::vector<WeightedInput> ensemble = lossy_input_ensemble(cfg.source);
    const auto [plus_set, minus_set] = fringing_patterns();

    FringeDataset ds;
    ds.unit = FringeDataset::Unit::radians;
    ds.control = alphas;
    CircuitSpec at_alpha = cfg.circuit;
    for (double alpha : alphas) {
        at_alpha.phases.assign(static_cast<size_t>(cfg.circuit.num_modes()), 0.0);
        at_alpha.phases[0] = alpha;
        const Eigen::MatrixXcd u = build_unitary(at_alpha);
        double plus = 0.0;
        double minus = 0.0;
        for (const WeightedInput& term : ensemble) {
            for (const FockState& pat : plus_set) {
                plus += term.weight * detail::pattern_probability(u, term, pat, cfg);
            }
            for (const FockState& pat : minus_set) {
                minus += term.weight * detail::pattern_probability(u, term, pat, cfg);
            }
        }
        ds.counts_plus.push_back(plus);
        ds.counts_minus.push_back(minus);
    }
    return ds;
}

struct C1Prediction {
    double c1_mod = 0.0;
    double fit_err = 0.0;  ///< residual-scaled: simulated traces carry no counting noise
};

namespace detail {

/// Fit error rescaled by the reduced chi^2. Simulated traces are exact model
/// curves, so the covariance under nominal shot-noise weights is rescaled to
/// reflect the actual residual (how non-sinusoidal the trace is).
inline double residual_scaled_error(const FitResult& fit) {
    const double reduced = std::max(fit.chi2, 0.0) / std::max(fit.dof, 1);
    return fit.c1_err * std::sqrt(reduced);
}

}  // namespace detail

/// Model-predicted visibility with a chosen subset of imperfections enabled;
/// partial distinguishability is always on. Disabled toggles reset g2, the
/// couplers, or the detector imbalances to their ideal values.
inline C1Prediction predicted_c1(const NoiseConfig& cfg, const std::set<NoiseToggle>& toggles,
                                 int phase_points = 24) {
    if (phase_points < 4) {
        throw input_error("need at least 4 phase points to fit");
    }
    NoiseConfig adjusted = cfg;
    if (!toggles.contains(NoiseToggle::multiphoton)) {
        adjusted.source.g2 = 0.0;
    }
    if (!toggles.contains(NoiseToggle::couplers)) {
        adjusted.circuit.transmissivities.assign(static_cast<size_t>(cfg.circuit.num_modes()), 0.5);
    }
    if (!toggles.contains(NoiseToggle::detection)) {
        adjusted.detectors = DetectorParams::balanced(cfg.circuit.num_modes());
    }
    std::vector<double> alphas(static_cast<size_t>(phase_points));
    for (int i = 0; i < phase_points; ++i) {
        alphas[static_cast<size_t>(i)] = 2.0 * pi * i / phase_points;
    }
    const FringeDataset ds = simulate_experiment(adjusted, alphas);
    const FitResult fit = fit_visibility(ds);
    return {fit.c1, detail::residual_scaled_error(fit)};
}

/// Maximum HOM visibility of each adjacent input pair (AB, BC, CD, DA)
/// through the spec's couplers: the device-level scale that multiplies the
/// photon-pair overlap in a measured visibility.
inline std::array<double, 4> pair_visibility_scales(const CircuitSpec& spec) {
    spec.validate();
    if (spec.n != 4) {
        throw input_error("pair visibility scales are defined for the 8-mode device");
    }
    CircuitSpec flat = spec;
    flat.phases.assign(static_cast<size_t>(spec.num_modes()), 0.0);
    const Eigen::MatrixXcd u = build_unitary(flat);
    const std::array<std::pair<int, int>, 4> inputs{{{1, 3}, {3, 5}, {5, 7}, {7, 1}}};
    const std::array<std::pair<int, int>, 4> outputs{{{2, 3}, {4, 5}, {6, 7}, {8, 1}}};
    std::array<double, 4> scales{};
    for (size_t i = 0; i < 4; ++i) {
        const FockState g = FockState::from_modes({inputs[i].first, inputs[i].second}, 8);
        const FockState h = FockState::from_modes({outputs[i].first, outputs[i].second}, 8);
        const double p_quantum = prob_indistinguishable(u, g, h);
        const double p_classical = prob_distinguishable(u, g, h);
        if (p_classical <= 0.0) {
            throw input_error("degenerate couplers: no classical coincidences on the HOM pair");
        }
        scales[i] = 1.0 - p_quantum / p_classical;
    }
    return scales;
}

/// Least-squares mixture weights x_A..x_D from the coupler-corrected cycle
/// of overlaps (M_AB, M_BC, M_CD, M_DA) ~ x_i x_j. The log-linear cycle
/// system has rank 3, so the minimum-norm solution is returned.
inline std::array<double, 4> fit_mixture_weights(const std::array<double, 4>& overlaps) {
    Eigen::Vector4d rhs;
    for (size_t i = 0; i < 4; ++i) {
        if (!(overlaps[i] > 0.0 && overlaps[i] <= 1.0)) {
            throw input_error("overlaps must lie in (0,1] to fit mixture weights");
        }
        rhs(static_cast<Eigen::Index>(i)) = std::log(overlaps[i]);
    }
    Eigen::Matrix4d incidence;
    incidence << 1, 1, 0, 0,
                 0, 1, 1, 0,
                 0, 0, 1, 1,
                 1, 0, 0, 1;
    const Eigen::Vector4d log_x =
        incidence.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(rhs);
    std::array<double, 4> x{};
    for (size_t i = 0; i < 4; ++i) {
        x[i] = std::min(1.0, std::exp(log_x(static_cast<Eigen::Index>(i))));
    }
    return x;
}

}  // namespace cisim

#endif
