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

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cisim/cisim.hpp"
#include "cisim/serialization.hpp"

namespace {

using nlohmann::json;

struct RunContext {
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    bool quiet = false;

    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
    std::vector<std::string> outputs;
    json resolved = json::object();

    std::filesystem::path path_for(const std::string& name) const {
        return std::filesystem::path(out_dir) / name;
    }

    void info(const std::string& line) const {
        if (!quiet) {
            std::cout << line << '\n';
        }
    }

    std::string write_file(const std::string& name, const std::string& content) {
        std::filesystem::create_directories(out_dir);
        const auto path = path_for(name);
        std::ofstream os(path, std::ios::binary);
        if (!os) {
            throw cisim::input_error("cannot open output file " + path.string());
        }
        os << content;
        outputs.push_back(path.string());
        return path.string();
    }

    void write_manifest(const std::string& command) {
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        json manifest{{"command", command}, {"version", cisim::version}, {"seed", seed},
                      {"config", resolved},  {"outputs", outputs},       {"duration_seconds", seconds}};
        std::filesystem::create_directories(out_dir);
        std::ofstream os(path_for(command + "_manifest.json"), std::ios::binary);
        os << manifest.dump(2) << '\n';
    }
};

json load_json_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw cisim::input_error("cannot open " + path);
    }
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw cisim::input_error("malformed JSON in " + path + ": " + e.what());
    }
}

std::vector<double> parse_alpha_grid(const std::string& text) {
    std::stringstream ss(text);
    std::string tok;
    std::vector<double> parts;
    while (std::getline(ss, tok, ':')) {
        try {
            parts.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw cisim::input_error("bad alpha grid '" + text + "', expected start:stop:count");
        }
    }
    if (parts.size() != 3) {
        throw cisim::input_error("bad alpha grid '" + text + "', expected start:stop:count");
    }
    const int count = static_cast<int>(parts[2]);
    if (count < 1 || std::abs(parts[2] - count) > 1e-9) {
        throw cisim::input_error("alpha grid count must be a positive integer");
    }
    return cisim::linspace(parts[0], parts[1], count);
}

std::vector<double> parse_double_list(const std::string& text) {
    std::stringstream ss(text);
    std::string tok;
    std::vector<double> out;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw cisim::input_error("cannot parse number list '" + text + "'");
        }
    }
    return out;
}

std::set<cisim::NoiseToggle> parse_toggles(const std::string& text) {
    std::set<cisim::NoiseToggle> toggles;
    if (text == "none") {
        return toggles;
    }
    if (text == "all") {
        return {cisim::NoiseToggle::multiphoton, cisim::NoiseToggle::couplers,
                cisim::NoiseToggle::detection};
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "multiphoton") {
            toggles.insert(cisim::NoiseToggle::multiphoton);
        } else if (tok == "couplers") {
            toggles.insert(cisim::NoiseToggle::couplers);
        } else if (tok == "detection") {
            toggles.insert(cisim::NoiseToggle::detection);
        } else {
            throw cisim::input_error("unknown toggle '" + tok + "'");
        }
    }
    return toggles;
}

cisim::NoiseConfig apply_toggles(cisim::NoiseConfig cfg, const std::set<cisim::NoiseToggle>& toggles) {
    if (!toggles.contains(cisim::NoiseToggle::multiphoton)) {
        cfg.source.g2 = 0.0;
    }
    if (!toggles.contains(cisim::NoiseToggle::couplers)) {
        cfg.circuit.transmissivities.assign(static_cast<size_t>(cfg.circuit.num_modes()), 0.5);
    }
    if (!toggles.contains(cisim::NoiseToggle::detection)) {
        cfg.detectors = cisim::DetectorParams::balanced(cfg.circuit.num_modes());
    }
    return cfg;
}

int cmd_build(RunContext& ctx, const std::string& spec_path) {
    const cisim::CircuitSpec spec = cisim::circuit_from_json(load_json_file(spec_path));
    ctx.resolved = cisim::circuit_to_json(spec);
    const Eigen::MatrixXcd u = cisim::build_unitary(spec);
    std::ostringstream csv;
    cisim::write_unitary_csv(csv, u);
    ctx.write_file("unitary.csv", csv.str());

    const cisim::PhaseCollapse collapsed = cisim::collapse_phases(spec);
    json report{{"alpha1", collapsed.alpha1},
                {"canonical_phases", collapsed.canonical.phases},
                {"transmissivities", collapsed.canonical.transmissivities}};
    ctx.write_file("build_report.json", report.dump(2) + "\n");
    std::cout << "alpha1 = " << cisim::format_g17(collapsed.alpha1) << '\n';
    ctx.write_manifest("build");
    return 0;
}

int cmd_prob(RunContext& ctx, const std::string& spec_path, const std::string& input_text,
             const std::string& output_text, bool indist, bool dist, const std::string& mixture_text) {
    const cisim::CircuitSpec spec = cisim::circuit_from_json(load_json_file(spec_path));
    const cisim::FockState input = cisim::FockState::parse(input_text);
    const cisim::FockState output = cisim::FockState::parse(output_text);
    if (input.num_modes() != spec.num_modes() || output.num_modes() != spec.num_modes()) {
        throw cisim::input_error("state mode count does not match the circuit");
    }
    const int selected = int(indist) + int(dist) + int(!mixture_text.empty());
    if (selected != 1) {
        throw cisim::input_error("choose exactly one of --indist, --dist, --mixture");
    }
    const Eigen::MatrixXcd u = cisim::build_unitary(spec);
    double p = 0.0;
    std::string model = "indistinguishable";
    if (indist) {
        p = cisim::prob_indistinguishable(u, input, output);
    } else if (dist) {
        p = cisim::prob_distinguishable(u, input, output);
        model = "distinguishable";
    } else {
        const auto x = parse_double_list(mixture_text);
        p = cisim::prob_partial(u, input, output, cisim::MixtureModel{x});
        model = "mixture";
    }
    ctx.resolved = json{{"spec", cisim::circuit_to_json(spec)},
                        {"input", input.to_string()},
                        {"output", output.to_string()},
                        {"model", model}};
    std::cout << cisim::format_g17(p) << '\n';
    ctx.write_manifest("prob");
    return 0;
}

int cmd_fringe(RunContext& ctx, const std::string& spec_path, std::string input_text, int photons,
               const std::string& alphas_text, const std::string& mixture_text) {
    const cisim::CircuitSpec spec = cisim::circuit_from_json(load_json_file(spec_path));
    if (photons < 0) {
        throw cisim::input_error("--photons must be positive");
    }
    if (photons > 0 && !input_text.empty()) {
        throw cisim::input_error("give either --input or --photons, not both");
    }
    cisim::FockState input = [&]() {
        if (!input_text.empty()) {
            return cisim::FockState::parse(input_text);
        }
        const int k = photons > 0 ? photons : spec.n;
        if (k > spec.n) {
            throw cisim::input_error("at most one photon per odd input mode is supported here");
        }
        std::vector<int> modes;
        for (int i = 0; i < k; ++i) {
            modes.push_back(2 * i + 1);
        }
        return cisim::FockState::from_modes(modes, spec.num_modes());
    }();
    if (input.num_modes() != spec.num_modes()) {
        throw cisim::input_error("input state mode count does not match the circuit");
    }

    const std::vector<double> alphas = parse_alpha_grid(alphas_text);
    cisim::DistinguishabilityModel model =
        mixture_text.empty() ? cisim::DistinguishabilityModel(cisim::uniform_mixture(input.photons(), 1.0))
                             : cisim::DistinguishabilityModel(
                                   cisim::MixtureModel{parse_double_list(mixture_text)});

    const auto outputs = cisim::enumerate_states(spec.num_modes(), input.photons(), true);
    int signed_outputs = 0;
    for (const auto& h : outputs) {
        if (cisim::fringe_sign(input, h) != cisim::FringeSign::none) {
            ++signed_outputs;
        }
    }
    if (signed_outputs == 0) {
        std::cerr << "warning: the input does not populate every input coupler pair, so the internal "
                     "phase cannot modulate any output; traces will be flat\n";
    } else {
        ctx.info("contributing output states: " + std::to_string(signed_outputs));
    }

    const cisim::FringeDataset ds = cisim::scan_fringe(spec, input, outputs, alphas, model);
    std::ostringstream csv;
    cisim::write_scan_csv(csv, ds);
    ctx.write_file("fringe.csv", csv.str());
    ctx.resolved = json{{"spec", cisim::circuit_to_json(spec)},
                        {"input", input.to_string()},
                        {"alphas", alphas_text},
                        {"signed_outputs", signed_outputs}};
    ctx.write_manifest("fringe");
    return 0;
}

int cmd_noise(RunContext& ctx, const std::string& config_path, const std::string& alphas_text,
              const std::string& toggles_text) {
    const json config_json = load_json_file(config_path);
    const cisim::NoiseConfig cfg = cisim::noise_config_from_json(config_json);
    const std::set<cisim::NoiseToggle> toggles =
        toggles_text.empty() ? cisim::toggles_from_json(config_json) : parse_toggles(toggles_text);
    const cisim::NoiseConfig adjusted = apply_toggles(cfg, toggles);

    const std::vector<double> alphas = parse_alpha_grid(alphas_text);
    const cisim::FringeDataset ds = cisim::simulate_experiment(adjusted, alphas);
    std::ostringstream csv;
    cisim::write_scan_csv(csv, ds);
    ctx.write_file("noise_fringe.csv", csv.str());

    const cisim::FitResult fit = cisim::fit_visibility(ds);
    json summary{{"c1_mod", fit.c1}, {"fit_error", cisim::detail::residual_scaled_error(fit)}};
    ctx.write_file("noise_summary.json", summary.dump(2) + "\n");
    std::cout << "c1_mod = " << cisim::format_g17(fit.c1) << '\n';

    std::vector<std::string> toggle_names;
    if (toggles.contains(cisim::NoiseToggle::multiphoton)) toggle_names.emplace_back("multiphoton");
    if (toggles.contains(cisim::NoiseToggle::couplers)) toggle_names.emplace_back("couplers");
    if (toggles.contains(cisim::NoiseToggle::detection)) toggle_names.emplace_back("detection");
    ctx.resolved = json{{"config", config_json}, {"alphas", alphas_text}, {"toggles", toggle_names}};
    ctx.write_manifest("noise");
    return 0;
}

int cmd_fit(RunContext& ctx, const std::string& data_path, const std::string& calibration_text) {
    std::ifstream is(data_path, std::ios::binary);
    if (!is) {
        throw cisim::input_error("cannot open " + data_path);
    }
    const cisim::FringeDataset ds = cisim::read_fringe_csv(is);
    std::optional<cisim::LinearPhaseMap> cal;
    if (!calibration_text.empty()) {
        const auto parts = parse_double_list(calibration_text);
        if (parts.size() != 2) {
            throw cisim::input_error("--calibration expects slope,offset");
        }
        cal = cisim::LinearPhaseMap{parts[0], parts[1]};
    }
    const cisim::FitResult fit = cisim::fit_visibility(ds, cal);
    json summary{{"c1", fit.c1},
                 {"c1_err", fit.c1_err},
                 {"amp_plus", fit.amp_plus},
                 {"amp_minus", fit.amp_minus},
                 {"chi2", fit.chi2},
                 {"dof", fit.dof},
                 {"calibrated", fit.calibrated},
                 {"slope", fit.phase_map.slope},
                 {"offset", fit.phase_map.offset}};
    ctx.write_file("fit.json", summary.dump(2) + "\n");
    std::cout << "c1 = " << cisim::format_g17(fit.c1) << " +/- " << cisim::format_g17(fit.c1_err) << '\n';
    ctx.resolved = json{{"data", data_path}, {"calibration", calibration_text}};
    ctx.write_manifest("fit");
    return 0;
}

int cmd_bounds(RunContext& ctx, const std::string& overlaps_text, const std::string& errors_text,
               int bootstrap_iterations) {
    const auto m = parse_double_list(overlaps_text);
    if (m.size() != 4) {
        throw cisim::input_error("--overlaps expects M_AB,M_BC,M_CD,M_DA");
    }
    std::vector<double> e(4, 0.0);
    if (!errors_text.empty()) {
        e = parse_double_list(errors_text);
        if (e.size() != 4) {
            throw cisim::input_error("--errors expects four values");
        }
    }
    cisim::OverlapSet overlaps{m[0], m[1], m[2], m[3], e[0], e[1], e[2], e[3]};
    const cisim::C1Bounds point = cisim::c1_bounds(overlaps);
    json summary{{"lower", point.lower}, {"upper", point.upper}, {"consistent", point.consistent}};
    if (bootstrap_iterations > 0) {
        const cisim::BootstrapBounds bs = cisim::bootstrap_bounds(overlaps, bootstrap_iterations, ctx.seed);
        summary["bootstrap"] = json{{"c1_min", bs.c1_min},
                                    {"c1_max", bs.c1_max},
                                    {"iterations", bs.iterations},
                                    {"seed", bs.seed}};
        std::cout << cisim::format_g17(bs.c1_min) << " <= c1 <= " << cisim::format_g17(bs.c1_max) << '\n';
    } else {
        std::cout << cisim::format_g17(point.lower) << " <= c1 <= " << cisim::format_g17(point.upper)
                  << '\n';
    }
    ctx.write_file("bounds.json", summary.dump(2) + "\n");
    ctx.resolved = json{{"overlaps", m}, {"errors", e}, {"bootstrap", bootstrap_iterations}};
    ctx.write_manifest("bounds");
    return 0;
}

int cmd_bench_permanent(RunContext& ctx, int max_k) {
    if (max_k < 2 || max_k > 28) {
        throw cisim::input_error("--max-k must be between 2 and 28");
    }
    cisim::SplitMix64 rng(ctx.seed);
    std::ostringstream table;
    table << "k,seconds\n";
    for (int k = 2; k <= max_k; ++k) {
        Eigen::MatrixXcd m(k, k);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                m(i, j) = std::complex<double>(rng.next_uniform() - 0.5, rng.next_uniform() - 0.5);
            }
        }
        const auto t0 = std::chrono::steady_clock::now();
        volatile double sink = std::abs(cisim::permanent_fast(m));
        (void)sink;
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        table << k << ',' << cisim::format_g17(dt) << '\n';
        ctx.info("k=" + std::to_string(k) + "  " + cisim::format_g17(dt) + " s");
    }
    ctx.write_file("bench_permanent.csv", table.str());
    ctx.resolved = json{{"max_k", max_k}};
    ctx.write_manifest("bench-permanent");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cisim: cyclic-interferometer multiphoton interference toolkit"};
    app.require_subcommand(1);

    RunContext ctx;
    app.add_option("--out-dir", ctx.out_dir, "directory for output files")
        ->envname("CISIM_OUT_DIR")
        ->capture_default_str();
    app.add_option("--seed", ctx.seed, "seed for randomized procedures")->capture_default_str();
    app.add_flag("--quiet", ctx.quiet, "suppress informational messages");

    std::string spec_path, config_path, data_path;
    std::string input_text, output_text, mixture_text, calibration_text;
    std::string alphas_text = "0:6.283185307179586:24";
    std::string toggles_text;
    std::string overlaps_text, errors_text;
    bool indist = false, dist = false;
    int photons = 0;
    int bootstrap_iterations = 0;
    int max_k = 20;

    auto* build = app.add_subcommand("build", "compile a circuit spec into its unitary");
    build->add_option("--spec", spec_path, "circuit spec JSON file")->required();

    auto* prob = app.add_subcommand("prob", "transition probability between two Fock states");
    prob->add_option("--spec", spec_path)->required();
    prob->add_option("--input", input_text, "input state, e.g. [1,3,5,7]@8")->required();
    prob->add_option("--output", output_text, "output state")->required();
    prob->add_flag("--indist", indist, "fully indistinguishable photons");
    prob->add_flag("--dist", dist, "fully distinguishable photons");
    prob->add_option("--mixture", mixture_text, "per-photon weights x1,x2,...");

    auto* fringe = app.add_subcommand("fringe", "scan the collapsed phase and tally fringing outputs");
    fringe->add_option("--spec", spec_path)->required();
    fringe->add_option("--input", input_text, "input state (default: one photon per odd mode)");
    fringe->add_option("--photons", photons, "put k photons on the first k odd modes");
    fringe->add_option("--alphas", alphas_text, "phase grid start:stop:count")->capture_default_str();
    fringe->add_option("--mixture", mixture_text, "per-photon weights x1,x2,...");

    auto* noise = app.add_subcommand("noise", "simulate the imperfect experiment and fit c1");
    noise->add_option("--config", config_path, "noise config JSON file")->required();
    noise->add_option("--alphas", alphas_text)->capture_default_str();
    noise->add_option("--toggles", toggles_text, "none | all | comma list of multiphoton,couplers,detection");

    auto* fit = app.add_subcommand("fit", "fit a fringe dataset for the visibility c1");
    fit->add_option("--data", data_path, "fringe CSV file")->required();
    fit->add_option("--calibration", calibration_text, "fixed phase map: slope,offset");

    auto* bounds = app.add_subcommand("bounds", "c1 bounds from pairwise overlaps");
    bounds->add_option("--overlaps", overlaps_text, "M_AB,M_BC,M_CD,M_DA")->required();
    bounds->add_option("--errors", errors_text, "standard errors, four values");
    bounds->add_option("--bootstrap", bootstrap_iterations, "bootstrap iterations (0 = point bounds only)");

    auto* bench = app.add_subcommand("bench-permanent", "time the permanent kernel");
    bench->add_option("--max-k", max_k)->capture_default_str();

    for (CLI::App* sub : app.get_subcommands({})) {
        sub->fallthrough();  // global flags may follow the subcommand
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (build->parsed()) {
            return cmd_build(ctx, spec_path);
        }
        if (prob->parsed()) {
            return cmd_prob(ctx, spec_path, input_text, output_text, indist, dist, mixture_text);
        }
        if (fringe->parsed()) {
            return cmd_fringe(ctx, spec_path, input_text, photons, alphas_text, mixture_text);
        }
        if (noise->parsed()) {
            return cmd_noise(ctx, config_path, alphas_text, toggles_text);
        }
        if (fit->parsed()) {
            return cmd_fit(ctx, data_path, calibration_text);
        }
        if (bounds->parsed()) {
            return cmd_bounds(ctx, overlaps_text, errors_text, bootstrap_iterations);
        }
        if (bench->parsed()) {
            return cmd_bench_permanent(ctx, max_k);
        }
    } catch (const cisim::fit_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const cisim::input_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
