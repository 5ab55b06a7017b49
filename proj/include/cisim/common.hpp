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

#ifndef CISIM_COMMON_HPP
#define CISIM_COMMON_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace cisim {

inline constexpr double pi = std::numbers::pi;

/// Bad user-supplied data (states, specs, models, files). CLI exit code 2.
class input_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A fit that cannot be carried out or did not converge. CLI exit code 3.
class fit_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Phase-calibration failure (insufficient data span etc.). CLI exit code 3.
class calibration_error : public fit_error {
  public:
    using fit_error::fit_error;
};

/// Reduce an angle to the branch (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * pi);
    if (r <= -pi) {
        r += 2.0 * pi;
    }
    return r;
}

/// n! as a double; exact up to n = 170.
inline double factorial(int n) {
    if (n < 0) {
        throw input_error("factorial of negative number");
    }
    double f = 1.0;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

inline std::vector<double> linspace(double start, double stop, int count) {
    if (count < 1) {
        throw input_error("linspace needs at least one point");
    }
    std::vector<double> out(static_cast<size_t>(count));
    if (count == 1) {
        out[0] = start;
        return out;
    }
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (int i = 0; i < count; ++i) {
        out[static_cast<size_t>(i)] = start + step * i;
    }
    return out;
}

/// Shortest decimal form that round-trips a double (17 significant digits).
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return {buf};
}

}  // namespace cisim

#endif
