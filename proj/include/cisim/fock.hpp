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

#ifndef CISIM_FOCK_HPP
#define CISIM_FOCK_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "cisim/common.hpp"

namespace cisim {

/// A fixed-photon-number state on N optical modes, stored as per-mode
/// occupation numbers. Modes are 1-based in every public interface.
class FockState {
  public:
    explicit FockState(std::vector<int> occupations) : occ_(std::move(occupations)) {
        if (occ_.empty()) {
            throw input_error("Fock state needs at least one mode");
        }
        photons_ = 0;
        for (int v : occ_) {
            if (v < 0) {
                throw input_error("negative occupation number");
            }
            photons_ += v;
        }
    }

    /// Build from a list of occupied (1-based) mode indices; order and
    /// repetitions in `modes` carry multiplicities, not ordering.
    static FockState from_modes(const std::vector<int>& modes, int num_modes) {
        if (num_modes < 1) {
            throw input_error("mode count must be positive");
        }
        std::vector<int> occ(static_cast<size_t>(num_modes), 0);
        for (int m : modes) {
            if (m < 1 || m > num_modes) {
                throw input_error("mode index " + std::to_string(m) + " out of range 1.." +
                                  std::to_string(num_modes));
            }
            ++occ[static_cast<size_t>(m - 1)];
        }
        return FockState(std::move(occ));
    }

    static FockState vacuum(int num_modes) { return from_modes({}, num_modes); }

    int num_modes() const { return static_cast<int>(occ_.size()); }
    int photons() const { return photons_; }
    const std::vector<int>& occupations() const { return occ_; }

    /// Occupation of a 1-based mode.
    int occupation(int mode) const {
        if (mode < 1 || mode > num_modes()) {
            throw input_error("mode index out of range");
        }
        return occ_[static_cast<size_t>(mode - 1)];
    }

    /// Non-decreasing list of occupied modes (1-based), one entry per photon.
    std::vector<int> mode_list() const {
        std::vector<int> modes;
        modes.reserve(static_cast<size_t>(photons_));
        for (int i = 0; i < num_modes(); ++i) {
            for (int c = 0; c < occ_[static_cast<size_t>(i)]; ++c) {
                modes.push_back(i + 1);
            }
        }
        return modes;
    }

    bool collision_free() const {
        return std::all_of(occ_.begin(), occ_.end(), [](int v) { return v <= 1; });
    }

    /// Product of occupation factorials, nu_1! ... nu_N!.
    double occupation_factorial() const {
        double f = 1.0;
        for (int v : occ_) {
            f *= factorial(v);
        }
        return f;
    }

    /// Compact text form, e.g. "1,0,1,0".
    std::string to_string() const {
        std::string s;
        for (size_t i = 0; i < occ_.size(); ++i) {
            if (i) {
                s += ',';
            }
            s += std::to_string(occ_[i]);
        }
        return s;
    }

    /// Parses either the occupation form "1,0,1,0,1,0,1,0" or the mode-list
    /// form "[1,3,5,7]@8".
    static FockState parse(std::string_view text);

    friend bool operator==(const FockState& a, const FockState& b) { return a.occ_ == b.occ_; }
    friend auto operator<=>(const FockState& a, const FockState& b) { return a.occ_ <=> b.occ_; }

  private:
    std::vector<int> occ_;
    int photons_ = 0;
};

namespace detail {

inline int parse_int(std::string_view s) {
    int value = 0;
    auto first = s.data();
    auto last = s.data() + s.size();
    while (first != last && *first == ' ') {
        ++first;
    }
    while (last != first && *(last - 1) == ' ') {
        --last;
    }
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || first == last) {
        throw input_error("cannot parse integer from '" + std::string(s) + "'");
    }
    return value;
}

inline std::vector<int> parse_int_list(std::string_view s) {
    std::vector<int> out;
    while (!s.empty()) {
        size_t comma = s.find(',');
        std::string_view tok = s.substr(0, comma);
        out.push_back(parse_int(tok));
        if (comma == std::string_view::npos) {
            break;
        }
        s.remove_prefix(comma + 1);
    }
    return out;
}

}  // namespace detail

inline FockState FockState::parse(std::string_view text) {
    size_t at = text.find('@');
    if (at != std::string_view::npos) {
        std::string_view list = text.substr(0, at);
        int num_modes = detail::parse_int(text.substr(at + 1));
        size_t open = list.find('[');
        size_t close = list.rfind(']');
        if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
            throw input_error("mode-list state must look like [1,3,5,7]@8");
        }
        std::string_view inner = list.substr(open + 1, close - open - 1);
        std::vector<int> modes;
        if (!inner.empty()) {
            modes = detail::parse_int_list(inner);
        }
        return from_modes(modes, num_modes);
    }
    std::vector<int> occ = detail::parse_int_list(text);
    if (occ.empty()) {
        throw input_error("empty Fock state");
    }
    return FockState(std::move(occ));
}

/// All k-photon Fock states on `num_modes` modes, ordered by their
/// non-decreasing mode lists (lexicographically). C(N+k-1,k) states, or
/// C(N,k) when restricted to collision-free ones.
inline std::vector<FockState> enumerate_states(int num_modes, int photons, bool collision_free) {
    if (num_modes < 1 || photons < 0) {
        throw input_error("enumerate_states needs N >= 1 and k >= 0");
    }
    std::vector<FockState> out;
    if (photons == 0) {
        out.push_back(FockState::vacuum(num_modes));
        return out;
    }
    std::vector<int> modes(static_cast<size_t>(photons));
    // depth-first over non-decreasing (or strictly increasing) mode tuples
    auto recurse = [&](auto&& self, int depth, int low) -> void {
        if (depth == photons) {
            out.push_back(FockState::from_modes(modes, num_modes));
            return;
        }
        for (int m = low; m <= num_modes; ++m) {
            modes[static_cast<size_t>(depth)] = m;
            self(self, depth + 1, collision_free ? m + 1 : m);
        }
    };
    recurse(recurse, 0, 1);
    return out;
}

/// Scattering submatrix S with S(i,j) = U(h_i, g_j): rows follow the output
/// mode list, columns the input mode list, repeating rows/columns for
/// multiply occupied modes.
inline Eigen::MatrixXcd scattering_submatrix(const Eigen::MatrixXcd& unitary, const FockState& input,
                                             const FockState& output) {
    if (input.photons() != output.photons()) {
        throw input_error("input and output photon numbers differ");
    }
    if (unitary.rows() != unitary.cols() || unitary.rows() != input.num_modes() ||
        input.num_modes() != output.num_modes()) {
        throw input_error("unitary dimension does not match the states");
    }
    const std::vector<int> g = input.mode_list();
    const std::vector<int> h = output.mode_list();
    const int k = static_cast<int>(g.size());
    Eigen::MatrixXcd s(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            s(i, j) = unitary(h[static_cast<size_t>(i)] - 1, g[static_cast<size_t>(j)] - 1);
        }
    }
    return s;
}

}  // namespace cisim

#endif
