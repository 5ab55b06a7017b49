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

#ifndef CISIM_FRINGE_DATASET_HPP
#define CISIM_FRINGE_DATASET_HPP

#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cisim/common.hpp"

namespace cisim {

/// A fringe scan: control values (phase in radians or heater power in
/// milliwatts) with plus-set and minus-set coincidence totals. Per-point
/// uncertainties are optional; absent means sqrt(N) shot noise.
struct FringeDataset {
    enum class Unit { radians, milliwatts };

    Unit unit = Unit::radians;
    std::vector<double> control;
    std::vector<double> counts_plus;
    std::vector<double> counts_minus;
    std::vector<double> err_plus;   ///< empty when uncertainties are implicit
    std::vector<double> err_minus;

    size_t size() const { return control.size(); }
    bool has_errors() const { return !err_plus.empty(); }

    void validate() const {
        if (counts_plus.size() != control.size() || counts_minus.size() != control.size()) {
            throw input_error("fringe dataset columns have unequal lengths");
        }
        if (err_plus.size() != err_minus.size()) {
            throw input_error("fringe dataset error columns have unequal lengths");
        }
        if (!err_plus.empty() && err_plus.size() != control.size()) {
            throw input_error("fringe dataset error columns have unequal lengths");
        }
        for (size_t i = 0; i < control.size(); ++i) {
            if (counts_plus[i] < 0.0 || counts_minus[i] < 0.0) {
                throw input_error("negative counts in fringe dataset");
            }
        }
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string tok;
    std::stringstream ss(line);
    while (std::getline(ss, tok, ',')) {
        out.push_back(tok);
    }
    return out;
}

inline double parse_double(const std::string& s) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\r')) {
            ++pos;
        }
        if (pos != s.size()) {
            throw input_error("trailing characters after number '" + s + "'");
        }
        return v;
    } catch (const std::invalid_argument&) {
        throw input_error("cannot parse number from '" + s + "'");
    } catch (const std::out_of_range&) {
        throw input_error("number out of range: '" + s + "'");
    }
}

inline std::string strip_cr(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) {
        s.pop_back();
    }
    return s;
}

}  // namespace detail

/// Reads the measured-data schema control,unit,counts_plus,counts_minus
/// [,err_plus,err_minus]. Scan CSVs written by write_scan_csv (header
/// alpha_rad,p_plus,p_minus,...) are accepted too, so fit can consume
/// simulated fringes directly.
inline FringeDataset read_fringe_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) {
        throw input_error("empty fringe CSV");
    }
    const std::string header = detail::strip_cr(line);
    FringeDataset ds;
    const bool scan_schema = header.rfind("alpha_rad", 0) == 0;
    if (!scan_schema && header.rfind("control", 0) != 0) {
        throw input_error("unrecognized fringe CSV header: " + header);
    }
    bool unit_set = false;
    while (std::getline(is, line)) {
        const std::string row = detail::strip_cr(line);
        if (row.empty()) {
            continue;
        }
        const auto cells = detail::split_csv_line(row);
        if (scan_schema) {
            if (cells.size() < 3) {
                throw input_error("scan CSV row needs at least 3 columns");
            }
            ds.unit = FringeDataset::Unit::radians;
            ds.control.push_back(detail::parse_double(cells[0]));
            ds.counts_plus.push_back(detail::parse_double(cells[1]));
            ds.counts_minus.push_back(detail::parse_double(cells[2]));
            continue;
        }
        if (cells.size() != 4 && cells.size() != 6) {
            throw input_error("fringe CSV row needs 4 or 6 columns");
        }
        const std::string unit = detail::strip_cr(cells[1]);
        FringeDataset::Unit u;
        if (unit == "radians" || unit == "rad") {
            u = FringeDataset::Unit::radians;
        } else if (unit == "milliwatts" || unit == "mW") {
            u = FringeDataset::Unit::milliwatts;
        } else {
            throw input_error("unknown control unit '" + unit + "'");
        }
        if (unit_set && u != ds.unit) {
            throw input_error("mixed control units in fringe CSV");
        }
        ds.unit = u;
        unit_set = true;
        ds.control.push_back(detail::parse_double(cells[0]));
        ds.counts_plus.push_back(detail::parse_double(cells[2]));
        ds.counts_minus.push_back(detail::parse_double(cells[3]));
        if (cells.size() == 6) {
            ds.err_plus.push_back(detail::parse_double(cells[4]));
            ds.err_minus.push_back(detail::parse_double(cells[5]));
        }
    }
    ds.validate();
    if (ds.control.empty()) {
        throw input_error("fringe CSV has no data rows");
    }
    return ds;
}

inline void write_fringe_csv(std::ostream& os, const FringeDataset& ds) {
    ds.validate();
    const char* unit = ds.unit == FringeDataset::Unit::radians ? "radians" : "milliwatts";
    os << (ds.has_errors() ? "control,unit,counts_plus,counts_minus,err_plus,err_minus"
                           : "control,unit,counts_plus,counts_minus")
       << '\n';
    for (size_t i = 0; i < ds.size(); ++i) {
        os << format_g17(ds.control[i]) << ',' << unit << ',' << format_g17(ds.counts_plus[i]) << ','
           << format_g17(ds.counts_minus[i]);
        if (ds.has_errors()) {
            os << ',' << format_g17(ds.err_plus[i]) << ',' << format_g17(ds.err_minus[i]);
        }
        os << '\n';
    }
}

/// Scan schema with traces normalized to their scan means, matching how
/// fringe plots are usually presented.
inline void write_scan_csv(std::ostream& os, const FringeDataset& ds) {
    ds.validate();
    if (ds.unit != FringeDataset::Unit::radians) {
        throw input_error("scan CSV requires radian control values");
    }
    auto mean = [](const std::vector<double>& v) {
        if (v.empty()) {
            return 0.0;
        }
        return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    };
    const double mean_plus = mean(ds.counts_plus);
    const double mean_minus = mean(ds.counts_minus);
    os << "alpha_rad,p_plus,p_minus,p_plus_normalized,p_minus_normalized\n";
    for (size_t i = 0; i < ds.size(); ++i) {
        const double np = mean_plus > 0.0 ? ds.counts_plus[i] / mean_plus : 0.0;
        const double nm = mean_minus > 0.0 ? ds.counts_minus[i] / mean_minus : 0.0;
        os << format_g17(ds.control[i]) << ',' << format_g17(ds.counts_plus[i]) << ','
           << format_g17(ds.counts_minus[i]) << ',' << format_g17(np) << ',' << format_g17(nm) << '\n';
    }
}

}  // namespace cisim

#endif
