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

#ifndef CISIM_RANDOM_HPP
#define CISIM_RANDOM_HPP

#include <cmath>
#include <cstdint>

#include "cisim/common.hpp"

namespace cisim {

/// SplitMix64: tiny, platform-independent generator. Standard-library
/// distributions are implementation-defined, so seeded outputs that must be
/// reproducible byte for byte are drawn through this instead.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in the open interval (0, 1).
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller. Draws two uniforms per call so the
    /// consumption pattern is fixed.
    double next_normal() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
    }

  private:
    std::uint64_t state_;
};

/// Derives an independent stream seed for a sub-task. Parallel bootstrap
/// iterations seeded this way give the same totals as a serial run.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (0xA0761D6478BD642FULL * (index + 1)));
    mix.next_u64();
    return mix.next_u64();
}

}  // namespace cisim

#endif
