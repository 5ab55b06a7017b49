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

#ifndef CISIM_INTERFERENCE_HPP
#define CISIM_INTERFERENCE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include "cisim/circuit.hpp"
#include "cisim/common.hpp"
#include "cisim/fock.hpp"
#include "cisim/fringe_dataset.hpp"
#include "cisim/permanent.hpp"

namespace cisim {

/// Each photon i is in the shared internal state with probability x_i and in
/// its own mutually orthogonal state otherwise; pairwise overlaps are
/// M_ij = x_i x_j. Weights align with the input state's mode list.
struct MixtureModel {
    std::vector<double> weights;
};

/// Explicit pairwise-overlap (Gram) matrix: Hermitian, unit diagonal,
/// positive semidefinite. Real entries are the supported regime; complex
/// Hermitian input is accepted but considered experimental.
struct GramModel {
    Eigen::MatrixXcd overlaps;
};

using DistinguishabilityModel = std::variant<MixtureModel, GramModel>;

inline MixtureModel uniform_mixture(int photons, double x) {
    return MixtureModel{std::vector<double>(static_cast<size_t>(photons), x)};
}

/// Transition probability for fully indistinguishable photons:
/// |perm S|^2 / (mu! nu!) with S the scattering submatrix.
inline double prob_indistinguishable(const Eigen::MatrixXcd& unitary, const FockState& input,
                                     const FockState& output) {
    if (input.photons() != output.photons()) {
        throw input_error("input and output photon numbers differ");
    }
    if (input.photons() > 12) {
        throw input_error("prob_indistinguishable supports k <= 12");
    }
    const Eigen::MatrixXcd s = scattering_submatrix(unitary, input, output);
    const std::complex<double> perm = permanent_fast(s);
    return std::norm(perm) / (input.occupation_factorial() * output.occupation_factorial());
}

/// Transition probability for fully distinguishable (classical) particles:
/// perm{|S_ij|^2} with the multinomial 1/nu! convention for repeated outputs.
inline double prob_distinguishable(const Eigen::MatrixXcd& unitary, const FockState& input,
                                   const FockState& output) {
    if (input.photons() != output.photons()) {
        throw input_error("input and output photon numbers differ");
    }
    if (input.photons() > 12) {
        throw input_error("prob_distinguishable supports k <= 12");
    }
    const Eigen::MatrixXcd s = scattering_submatrix(unitary, input, output);
    const Eigen::MatrixXcd s2 = s.cwiseAbs2();
    return permanent_fast(s2).real() / output.occupation_factorial();
}

namespace detail {

/// One photon of a mixture term: its input mode and its mixture weight.
struct MixturePhoton {
    int mode = 0;
    double x = 0.0;
};

/// Enumerates occupation vectors with `photons` photons bounded above by
/// `limit` entrywise, invoking fn on each.
template <typename Fn>
void for_each_suboccupation(const std::vector<int>& limit, int photons, Fn&& fn) {
    std::vector<int> occ(limit.size(), 0);
    auto recurse = [&](auto&& self, size_t idx, int left) -> void {
        if (idx == limit.size()) {
            if (left == 0) {
                fn(occ);
            }
            return;
        }
        // remaining capacity after this mode
        int tail = 0;
        for (size_t j = idx + 1; j < limit.size(); ++j) {
            tail += limit[j];
        }
        const int lo = std::max(0, left - tail);
        const int hi = std::min(limit[idx], left);
        for (int c = lo; c <= hi; ++c) {
            occ[idx] = c;
            self(self, idx + 1, left - c);
        }
        occ[idx] = 0;
    };
    recurse(recurse, 0, photons);
}

/// Quantum transition probability for one photon group given its input
/// modes (1-based, possibly repeated) and a group output occupation vector.
inline double group_transition(const Eigen::MatrixXcd& unitary, std::vector<int> group_modes,
                               const std::vector<int>& out_occ) {
    std::sort(group_modes.begin(), group_modes.end());
    const int k = static_cast<int>(group_modes.size());
    Eigen::MatrixXcd s(k, k);
    double nu_fact = 1.0;
    int row = 0;
    for (size_t mode0 = 0; mode0 < out_occ.size(); ++mode0) {
        nu_fact *= factorial(out_occ[mode0]);
        for (int c = 0; c < out_occ[mode0]; ++c) {
            for (int j = 0; j < k; ++j) {
                s(row, j) = unitary(static_cast<Eigen::Index>(mode0),
                                    group_modes[static_cast<size_t>(j)] - 1);
            }
            ++row;
        }
    }
    double mu_fact = 1.0;
    {
        int run = 1;
        for (size_t j = 1; j < group_modes.size(); ++j) {
            run = (group_modes[j] == group_modes[j - 1]) ? run + 1 : 1;
            mu_fact *= run;
        }
    }
    return std::norm(permanent_fast(s)) / (mu_fact * nu_fact);
}

/// Probability that photons split into mutually orthogonal groups (identical
/// within a group) produce the output occupation `output`. Orthogonal groups
/// do not interfere, so the output splits into per-group occupations summed
/// over all compositions.
inline double grouped_probability(const Eigen::MatrixXcd& unitary,
                                  const std::vector<std::vector<int>>& groups, const FockState& output) {
    const std::vector<int>& target = output.occupations();
    double total = 0.0;
    std::vector<int> remaining = target;
    auto recurse = [&](auto&& self, size_t gi, double acc) -> void {
        if (gi == groups.size()) {
            total += acc;
            return;
        }
        const auto& modes = groups[gi];
        for_each_suboccupation(remaining, static_cast<int>(modes.size()), [&](const std::vector<int>& occ) {
            const double p = group_transition(unitary, modes, occ);
            if (p == 0.0) {
                return;
            }
            for (size_t i = 0; i < occ.size(); ++i) {
                remaining[i] -= occ[i];
            }
            self(self, gi + 1, acc * p);
            for (size_t i = 0; i < occ.size(); ++i) {
                remaining[i] += occ[i];
            }
        });
    };
    recurse(recurse, 0, 1.0);
    return total;
}

/// Mixture-model transition probability: condition on the subset of photons
/// that are in the shared internal state, then evaluate the resulting
/// orthogonal-group configuration.
inline double mixture_probability(const Eigen::MatrixXcd& unitary, const std::vector<MixturePhoton>& photons,
                                  const FockState& output) {
    std::vector<int> common;        // always in the shared state (x = 1)
    std::vector<size_t> free_idx;   // 0 < x < 1
    std::vector<int> lone;          // x = 0
    for (size_t i = 0; i < photons.size(); ++i) {
        if (photons[i].x >= 1.0) {
            common.push_back(photons[i].mode);
        } else if (photons[i].x <= 0.0) {
            lone.push_back(photons[i].mode);
        } else {
            free_idx.push_back(i);
        }
    }

    double total = 0.0;
    const std::uint32_t combos = std::uint32_t{1} << free_idx.size();
    for (std::uint32_t mask = 0; mask < combos; ++mask) {
        double weight = 1.0;
        std::vector<std::vector<int>> groups;
        std::vector<int> shared = common;
        for (size_t b = 0; b < free_idx.size(); ++b) {
            const auto& ph = photons[free_idx[b]];
            if (mask & (std::uint32_t{1} << b)) {
                weight *= ph.x;
                shared.push_back(ph.mode);
            } else {
                weight *= 1.0 - ph.x;
                groups.push_back({ph.mode});
            }
        }
        for (int mode : lone) {
            groups.push_back({mode});
        }
        if (!shared.empty()) {
            std::sort(shared.begin(), shared.end());
            groups.push_back(std::move(shared));
        }
        if (weight > 0.0) {
            total += weight * grouped_probability(unitary, groups, output);
        }
    }
    return total;
}

/// General Gram-matrix transition probability. Sums over pairs of output
/// mode arrangements with the overlap permanent matching bra and ket
/// assignments; the input-state normalization permanent divides the result.
/// Reduces to the permutation double sum on collision-free states.
inline double gram_probability(const Eigen::MatrixXcd& unitary, const std::vector<int>& g_modes,
                               const FockState& output, const Eigen::MatrixXcd& overlaps) {
    const int k = static_cast<int>(g_modes.size());
    if (k == 0) {
        return output.photons() == 0 ? 1.0 : 0.0;
    }

    Eigen::MatrixXcd norm_matrix(k, k);
    for (int j = 0; j < k; ++j) {
        for (int l = 0; l < k; ++l) {
            norm_matrix(j, l) = g_modes[static_cast<size_t>(j)] == g_modes[static_cast<size_t>(l)]
                                    ? overlaps(j, l)
                                    : std::complex<double>(0.0, 0.0);
        }
    }
    const double denom = permanent_fast(norm_matrix).real();

    std::vector<std::vector<int>> arrangements;
    std::vector<int> arr = output.mode_list();
    do {
        arrangements.push_back(arr);
    } while (std::next_permutation(arr.begin(), arr.end()));

    std::vector<std::complex<double>> amplitude(arrangements.size());
    for (size_t a = 0; a < arrangements.size(); ++a) {
        std::complex<double> prod{1.0, 0.0};
        for (int j = 0; j < k; ++j) {
            prod *= unitary(arrangements[a][static_cast<size_t>(j)] - 1, g_modes[static_cast<size_t>(j)] - 1);
        }
        amplitude[a] = prod;
    }

    Eigen::MatrixXcd match(k, k);
    std::complex<double> total{0.0, 0.0};
    for (size_t a = 0; a < arrangements.size(); ++a) {          // ket arrangement
        for (size_t b = 0; b < arrangements.size(); ++b) {      // bra arrangement
            for (int j = 0; j < k; ++j) {
                for (int l = 0; l < k; ++l) {
                    match(j, l) = arrangements[b][static_cast<size_t>(j)] ==
                                          arrangements[a][static_cast<size_t>(l)]
                                      ? overlaps(j, l)
                                      : std::complex<double>(0.0, 0.0);
                }
            }
            total += amplitude[a] * std::conj(amplitude[b]) * permanent_fast(match);
        }
    }
    return total.real() / denom;
}

inline void validate_gram(const Eigen::MatrixXcd& s, int photons) {
    if (s.rows() != s.cols() || s.rows() != photons) {
        throw input_error("overlap matrix must be k x k for k photons");
    }
    const double herm = (s - s.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) {
        throw input_error("overlap matrix is not Hermitian");
    }
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
        if (std::abs(s(i, i) - std::complex<double>(1.0, 0.0)) > 1e-10) {
            throw input_error("overlap matrix diagonal must be 1");
        }
        for (Eigen::Index j = 0; j < s.cols(); ++j) {
            if (std::abs(s(i, j)) > 1.0 + 1e-10) {
                throw input_error("overlap magnitudes cannot exceed 1");
            }
        }
    }
    if (s.rows() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
        if (es.eigenvalues().minCoeff() < -1e-9) {
            throw input_error("overlap matrix is not positive semidefinite");
        }
    }
}

inline std::vector<double> validate_mixture(const std::vector<double>& weights, int photons) {
    if (static_cast<int>(weights.size()) != photons) {
        throw input_error("mixture model needs one weight per photon");
    }
    std::vector<double> out = weights;
    for (double& x : out) {
        if (x < -1e-12 || x > 1.0 + 1e-12) {
            throw input_error("mixture weight outside [0,1]");
        }
        x = std::clamp(x, 0.0, 1.0);
    }
    return out;
}

}  // namespace detail

/// Transition probability for partially distinguishable photons. The two
/// model variants use independent evaluation paths that agree with each
/// other and with the indistinguishable/distinguishable limits.
inline double prob_partial(const Eigen::MatrixXcd& unitary, const FockState& input, const FockState& output,
                           const DistinguishabilityModel& model) {
    if (input.photons() != output.photons()) {
        throw input_error("input and output photon numbers differ");
    }
    const std::vector<int> g = input.mode_list();
    const int k = static_cast<int>(g.size());
    if (const auto* mixture = std::get_if<MixtureModel>(&model)) {
        const std::vector<double> x = detail::validate_mixture(mixture->weights, k);
        std::vector<detail::MixturePhoton> photons(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) {
            photons[static_cast<size_t>(i)] = {g[static_cast<size_t>(i)], x[static_cast<size_t>(i)]};
        }
        return detail::mixture_probability(unitary, photons, output);
    }
    const auto& gram = std::get<GramModel>(model);
    if (k > 6) {
        throw input_error("the Gram evaluator supports k <= 6");
    }
    detail::validate_gram(gram.overlaps, k);
    return detail::gram_probability(unitary, g, output, gram.overlaps);
}

enum class FringeSign { plus, minus, none };

/// The pairing rule: n collision-free photons with exactly one photon per
/// input pair (2m-1, 2m) and one per output pair (2m, 2m+1), wrapping
/// around through (N, 1). States obeying it fringe with sign
/// (-1)^(n + p + q); all others show no phase dependence at all.
inline FringeSign fringe_sign(const FockState& input, const FockState& output) {
    if (input.num_modes() != output.num_modes()) {
        return FringeSign::none;
    }
    const int num_modes = input.num_modes();
    if (num_modes % 2 != 0) {
        return FringeSign::none;
    }
    const int n = num_modes / 2;
    if (input.photons() != n || output.photons() != n) {
        return FringeSign::none;
    }
    if (!input.collision_free() || !output.collision_free()) {
        return FringeSign::none;
    }
    const auto& gi = input.occupations();
    const auto& ho = output.occupations();
    for (int m = 0; m < n; ++m) {
        if (gi[static_cast<size_t>(2 * m)] + gi[static_cast<size_t>(2 * m + 1)] != 1) {
            return FringeSign::none;
        }
    }
    for (int m = 1; m < n; ++m) {
        if (ho[static_cast<size_t>(2 * m - 1)] + ho[static_cast<size_t>(2 * m)] != 1) {
            return FringeSign::none;
        }
    }
    if (ho[static_cast<size_t>(num_modes - 1)] + ho[0] != 1) {
        return FringeSign::none;
    }
    int even_in = 0;
    int even_out = 0;
    for (int i = 1; i < num_modes; i += 2) {  // 1-based even modes
        even_in += gi[static_cast<size_t>(i)];
        even_out += ho[static_cast<size_t>(i)];
    }
    return ((n + even_in + even_out) % 2 == 0) ? FringeSign::plus : FringeSign::minus;
}

/// P(alpha) = baseline * (1 + sign * visibility * cos alpha).
struct FringePrediction {
    double baseline = 0.0;
    int sign = 1;
    double visibility = 0.0;

    double operator()(double alpha) const { return baseline * (1.0 + sign * visibility * std::cos(alpha)); }
};

/// Closed-form fringe of the ideal cyclic interferometer for a state pair
/// obeying the pairing rule.
inline FringePrediction closed_form_fringe(int n, const FockState& input, const FockState& output,
                                           double c1) {
    if (n < 2 || input.num_modes() != 2 * n || output.num_modes() != 2 * n) {
        throw input_error("states do not live on 2n modes");
    }
    if (!(c1 >= 0.0 && c1 <= 1.0)) {
        throw input_error("visibility outside [0,1]");
    }
    const FringeSign sign = fringe_sign(input, output);
    if (sign == FringeSign::none) {
        throw input_error("state pair violates the one-photon-per-pair rule; no fringe");
    }
    FringePrediction out;
    out.baseline = std::ldexp(1.0, -(2 * n - 1));
    out.sign = sign == FringeSign::plus ? 1 : -1;
    out.visibility = c1;
    return out;
}

/// Scans the single collapsed phase over `alphas` (the spec's own phases are
/// replaced by alpha on arm 1; couplers are kept). Outputs are split by
/// fringe_sign into the plus and minus trace; unsigned outputs are dropped
/// unless no output carries a sign, in which case all outputs feed both
/// traces and the scan is flat.
inline FringeDataset scan_fringe(const CircuitSpec& spec, const FockState& input,
                                 const std::vector<FockState>& outputs, const std::vector<double>& alphas,
                                 const DistinguishabilityModel& model) {
    spec.validate();
    if (outputs.empty()) {
        throw input_error("scan_fringe needs at least one output state");
    }
    if (alphas.empty()) {
        throw input_error("scan_fringe needs at least one phase value");
    }
    std::vector<FockState> plus_set;
    std::vector<FockState> minus_set;
    for (const FockState& h : outputs) {
        switch (fringe_sign(input, h)) {
            case FringeSign::plus: plus_set.push_back(h); break;
            case FringeSign::minus: minus_set.push_back(h); break;
            case FringeSign::none: break;
        }
    }
    if (plus_set.empty() && minus_set.empty()) {
        plus_set = outputs;
        minus_set = outputs;
    }

    FringeDataset ds;
    ds.unit = FringeDataset::Unit::radians;
    ds.control = alphas;
    ds.counts_plus.reserve(alphas.size());
    ds.counts_minus.reserve(alphas.size());
    CircuitSpec at_alpha = spec;
    for (double alpha : alphas) {
        at_alpha.phases.assign(static_cast<size_t>(spec.num_modes()), 0.0);
        at_alpha.phases[0] = alpha;
        const Eigen::MatrixXcd u = build_unitary(at_alpha);
        double plus = 0.0;
        double minus = 0.0;
        for (const FockState& h : plus_set) {
            plus += prob_partial(u, input, h, model);
        }
        for (const FockState& h : minus_set) {
            minus += prob_partial(u, input, h, model);
        }
        ds.counts_plus.push_back(plus);
        ds.counts_minus.push_back(minus);
    }
    return ds;
}

}  // namespace cisim

#endif
