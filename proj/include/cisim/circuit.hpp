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

#ifndef CISIM_CIRCUIT_HPP
#define CISIM_CIRCUIT_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <ostream>
#include <vector>

#include "cisim/common.hpp"

namespace cisim {

/// Layout parameters of the 2n-mode cyclic interferometer: one internal
/// phase per arm and one transmissivity per coupler. The n first-layer
/// couplers act on mode pairs (1,2), (3,4), ...; the n second-layer
/// couplers act on (2,3), (4,5), ..., closing the cycle with (N,1).
struct CircuitSpec {
    int n = 0;                             ///< photon capacity; the device has N = 2n modes
    std::vector<double> phases;            ///< phi_1..phi_N, radians
    std::vector<double> transmissivities;  ///< T_1..T_N in [0,1]; first layer first

    static CircuitSpec ideal(int n) {
        CircuitSpec spec;
        spec.n = n;
        spec.phases.assign(static_cast<size_t>(2 * n), 0.0);
        spec.transmissivities.assign(static_cast<size_t>(2 * n), 0.5);
        spec.validate();
        return spec;
    }

    /// Ideal couplers with the single phase alpha on arm 1.
    static CircuitSpec with_alpha(int n, double alpha) {
        CircuitSpec spec = ideal(n);
        spec.phases[0] = alpha;
        return spec;
    }

    int num_modes() const { return 2 * n; }

    bool ideal_couplers(double tol = 1e-12) const {
        for (double t : transmissivities) {
            if (std::abs(t - 0.5) > tol) {
                return false;
            }
        }
        return true;
    }

    void validate() const {
        if (n < 2) {
            throw input_error("cyclic interferometer needs n >= 2 (the 2-mode layout degenerates)");
        }
        const size_t expected = static_cast<size_t>(2 * n);
        if (phases.size() != expected) {
            throw input_error("expected " + std::to_string(expected) + " phases");
        }
        if (transmissivities.size() != expected) {
            throw input_error("expected " + std::to_string(expected) + " transmissivities");
        }
        for (double t : transmissivities) {
            if (!(t >= 0.0 && t <= 1.0)) {
                throw input_error("transmissivity outside [0,1]");
            }
        }
    }
};

/// Symmetric beam-splitter matrix [[sqrt(T), i sqrt(1-T)], [i sqrt(1-T), sqrt(T)]].
/// T = 1/2 gives the balanced coupler, T = 1 the identity.
inline Eigen::Matrix2cd beam_splitter(double transmissivity) {
    if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
        throw input_error("beam splitter transmissivity outside [0,1]");
    }
    const double t = std::sqrt(transmissivity);
    const double r = std::sqrt(1.0 - transmissivity);
    Eigen::Matrix2cd bs;
    bs << std::complex<double>(t, 0.0), std::complex<double>(0.0, r),
        std::complex<double>(0.0, r), std::complex<double>(t, 0.0);
    return bs;
}

/// N x N unitary of the cyclic interferometer: second coupler layer times
/// the internal phase layer times the first coupler layer.
inline Eigen::MatrixXcd build_unitary(const CircuitSpec& spec) {
    spec.validate();
    const int n = spec.n;
    const int num_modes = 2 * n;

    Eigen::MatrixXcd layer1 = Eigen::MatrixXcd::Identity(num_modes, num_modes);
    for (int m = 0; m < n; ++m) {
        layer1.block<2, 2>(2 * m, 2 * m) = beam_splitter(spec.transmissivities[static_cast<size_t>(m)]);
    }

    Eigen::VectorXcd phase(num_modes);
    for (int i = 0; i < num_modes; ++i) {
        phase(i) = std::polar(1.0, spec.phases[static_cast<size_t>(i)]);
    }

    Eigen::MatrixXcd layer2 = Eigen::MatrixXcd::Identity(num_modes, num_modes);
    for (int m = 1; m < n; ++m) {
        // couples 1-based modes (2m, 2m+1)
        layer2.block<2, 2>(2 * m - 1, 2 * m - 1) =
            beam_splitter(spec.transmissivities[static_cast<size_t>(n + m - 1)]);
    }
    {
        // wraparound coupler on modes (N, 1)
        const Eigen::Matrix2cd bs = beam_splitter(spec.transmissivities[static_cast<size_t>(2 * n - 1)]);
        layer2(num_modes - 1, num_modes - 1) = bs(0, 0);
        layer2(num_modes - 1, 0) = bs(0, 1);
        layer2(0, num_modes - 1) = bs(1, 0);
        layer2(0, 0) = bs(1, 1);
    }

    return layer2 * phase.asDiagonal() * layer1;
}

inline bool is_unitary(const Eigen::MatrixXcd& u, double tol = 1e-10) {
    if (u.rows() != u.cols()) {
        return false;
    }
    const Eigen::MatrixXcd gram = u.adjoint() * u;
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    return (gram - eye).cwiseAbs().maxCoeff() <= tol;
}

struct PhaseCollapse {
    double alpha1 = 0.0;      ///< sum of (phi_odd - phi_even), wrapped to (-pi, pi]
    CircuitSpec canonical;    ///< same couplers, phases (alpha1, 0, ..., 0)
};

/// Collapse all internal phases to the single equivalent phase on arm 1.
inline PhaseCollapse collapse_phases(const CircuitSpec& spec) {
    spec.validate();
    double alpha = 0.0;
    for (int m = 0; m < spec.n; ++m) {
        alpha += spec.phases[static_cast<size_t>(2 * m)] - spec.phases[static_cast<size_t>(2 * m + 1)];
    }
    PhaseCollapse out;
    out.alpha1 = wrap_angle(alpha);
    out.canonical = spec;
    out.canonical.phases.assign(static_cast<size_t>(2 * spec.n), 0.0);
    out.canonical.phases[0] = out.alpha1;
    return out;
}

/// Equivalent circuit with the single phase moved to arm `arm` (1-based):
/// +alpha1 on odd arms, -alpha1 on even arms. Requires ideal couplers.
inline CircuitSpec equivalent_single_phase(const CircuitSpec& spec, int arm) {
    spec.validate();
    if (arm < 1 || arm > spec.num_modes()) {
        throw input_error("arm index out of range");
    }
    if (!spec.ideal_couplers()) {
        throw input_error("single-phase relocation requires balanced couplers");
    }
    const PhaseCollapse collapsed = collapse_phases(spec);
    CircuitSpec out = spec;
    out.phases.assign(static_cast<size_t>(spec.num_modes()), 0.0);
    out.phases[static_cast<size_t>(arm - 1)] = (arm % 2 == 1) ? collapsed.alpha1 : -collapsed.alpha1;
    return out;
}

/// CSV export: one row per mode, 2N columns of interleaved real/imaginary parts.
inline void write_unitary_csv(std::ostream& os, const Eigen::MatrixXcd& u) {
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            if (j) {
                os << ',';
            }
            os << format_g17(u(i, j).real()) << ',' << format_g17(u(i, j).imag());
        }
        os << '\n';
    }
}

}  // namespace cisim

#endif
