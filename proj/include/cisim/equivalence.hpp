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

#ifndef CISIM_EQUIVALENCE_HPP
#define CISIM_EQUIVALENCE_HPP

#include <Eigen/Dense>

#include "cisim/circuit.hpp"
#include "cisim/common.hpp"
#include "cisim/fock.hpp"
#include "cisim/interference.hpp"

namespace cisim {

/// Two interferometers are equivalent when they give the same Fock-state
/// transition probabilities. Checks every input/output pair of up to
/// `max_photons` identical photons, repeated occupations included.
inline bool unitaries_equivalent(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, int max_photons,
                                 double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
        throw input_error("unitaries must be square and of equal dimension");
    }
    const int num_modes = static_cast<int>(a.rows());
    for (int k = 1; k <= max_photons; ++k) {
        const std::vector<FockState> states = enumerate_states(num_modes, k, false);
        for (const FockState& g : states) {
            for (const FockState& h : states) {
                const double pa = prob_indistinguishable(a, g, h);
                const double pb = prob_indistinguishable(b, g, h);
                if (std::abs(pa - pb) > tol) {
                    return false;
                }
            }
        }
    }
    return true;
}

inline bool is_equivalent(const CircuitSpec& a, const CircuitSpec& b, int max_photons, double tol) {
    a.validate();
    b.validate();
    if (a.num_modes() != b.num_modes()) {
        throw input_error("circuits have different mode counts");
    }
    return unitaries_equivalent(build_unitary(a), build_unitary(b), max_photons, tol);
}

}  // namespace cisim

#endif
