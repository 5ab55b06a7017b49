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

#ifndef CISIM_SERIALIZATION_HPP
#define CISIM_SERIALIZATION_HPP

#include <json.hpp>
#include <set>
#include <string>
#include <vector>

#include "cisim/circuit.hpp"
#include "cisim/common.hpp"
#include "cisim/noise.hpp"

namespace cisim {

/// {"n": int, "phases": [2n reals], "transmissivities": [2n reals]};
/// omitted phases default to zero, omitted transmissivities to 1/2.
inline CircuitSpec circuit_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n")) {
        throw input_error("circuit spec JSON needs an integer field \"n\"");
    }
    CircuitSpec spec;
    spec.n = j.at("n").get<int>();
    if (spec.n < 2) {
        throw input_error("cyclic interferometer needs n >= 2");
    }
    const size_t num_modes = static_cast<size_t>(2 * spec.n);
    spec.phases = j.value("phases", std::vector<double>(num_modes, 0.0));
    spec.transmissivities = j.value("transmissivities", std::vector<double>(num_modes, 0.5));
    spec.validate();
    return spec;
}

inline nlohmann::json circuit_to_json(const CircuitSpec& spec) {
    return nlohmann::json{{"n", spec.n},
                          {"phases", spec.phases},
                          {"transmissivities", spec.transmissivities}};
}

/// Noise configuration file: {"brightness": r, "g2": r, "eta": r,
/// "detector_imbalance": [8 reals], "transmissivities": [8 reals],
/// "x": [4 reals], "toggles": ["multiphoton","couplers","detection"]}.
/// Omitted imbalances/transmissivities default to ideal values; omitted
/// toggles mean every imperfection is applied.
inline NoiseConfig noise_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw input_error("noise config must be a JSON object");
    }
    NoiseConfig cfg;
    cfg.source.brightness = j.at("brightness").get<double>();
    cfg.source.g2 = j.at("g2").get<double>();
    cfg.source.eta = j.at("eta").get<double>();
    cfg.detectors = DetectorParams(j.value("detector_imbalance", std::vector<double>(8, 1.0)));
    cfg.circuit = CircuitSpec::ideal(4);
    cfg.circuit.transmissivities = j.value("transmissivities", std::vector<double>(8, 0.5));
    const auto x = j.at("x").get<std::vector<double>>();
    if (x.size() != 4) {
        throw input_error("noise config needs exactly 4 photon weights");
    }
    for (size_t i = 0; i < 4; ++i) {
        cfg.photon_weights[i] = x[i];
    }
    cfg.validate();
    return cfg;
}

inline std::set<NoiseToggle> toggles_from_json(const nlohmann::json& j) {
    std::set<NoiseToggle> toggles{NoiseToggle::multiphoton, NoiseToggle::couplers, NoiseToggle::detection};
    if (!j.contains("toggles")) {
        return toggles;
    }
    toggles.clear();
    for (const auto& name : j.at("toggles")) {
        const std::string s = name.get<std::string>();
        if (s == "multiphoton") {
            toggles.insert(NoiseToggle::multiphoton);
        } else if (s == "couplers") {
            toggles.insert(NoiseToggle::couplers);
        } else if (s == "detection") {
            toggles.insert(NoiseToggle::detection);
        } else {
            throw input_error("unknown noise toggle '" + s + "'");
        }
    }
    return toggles;
}

}  // namespace cisim

#endif
