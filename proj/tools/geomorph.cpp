#include "geomorph/config.hpp"
#include "geomorph/errors.hpp"
#include "geomorph/experiment.hpp"
#include "geomorph/output.hpp"
#include "geomorph/parallel.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInstability = 3;
constexpr int kExitOther = 1;

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out;
};

geomorph::ExperimentConfig load(const std::string& path, const Overrides& o) {
    auto config = geomorph::load_config(path);
    if (o.seed) geomorph::apply_seed(config, *o.seed);
    if (o.workers) config.workers = *o.workers;
    if (o.out) config.output_dir = *o.out;
    config.validate();
    return config;
}

void print_metrics(const geomorph::ExperimentReport& report) {
    std::printf("%-12s %-8s %22s %22s\n", "stage", "variable", "mean member MSE", "ensemble-mean MSE");
    for (const auto& m : report.metrics) {
        std::printf("%-12s %-8s %22.10e %22.10e\n", m.stage.c_str(), m.variable.c_str(), m.mean_member_mse,
                    m.ensemble_mean_mse);
    }
}

int cmd_run(const std::string& path, const Overrides& o) {
    const auto config = load(path, o);
    std::printf("running '%s' (%s) with %d worker(s)\n", config.name.c_str(), std::string(to_string(config.pipeline)).c_str(),
                geomorph::resolve_workers(config.workers));
    const auto start = std::chrono::steady_clock::now();
    const auto report = geomorph::run_experiment(config);
    const auto entries = geomorph::emit_outputs(report, config.output_dir);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    print_metrics(report);
    std::printf("wrote %zu artifacts to %s (manifest.json) in %.1f s\n", entries.size(), config.output_dir.c_str(), seconds);
    return 0;
}

int cmd_validate(const std::string& path, const Overrides& o) {
    const auto config = load(path, o);
    std::cout << geomorph::config_to_json(config);
    return 0;
}

int cmd_presets(const std::string& name) {
    if (!name.empty()) {
        std::cout << geomorph::config_to_json(geomorph::preset(name));
        return 0;
    }
    for (const auto& p : geomorph::preset_list()) std::printf("%-14s %s\n", p.name.c_str(), p.description.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Displacement-aware morphing and ensemble data assimilation on the thermal shallow water model"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { o.seed = s; },
                                           "Ensemble seed; the observation-noise seed becomes seed + 1");
    app.add_option_function<int>("--workers", [&](const int& w) { o.workers = w; },
                                 "Worker threads for member-parallel stages (0 = all cores, capped by " +
                                     std::string(geomorph::kMaxThreadsEnv) + ")")
        ->check(CLI::NonNegativeNumber);
    app.add_option_function<std::string>("--out", [&](const std::string& d) { o.out = d; }, "Output directory");

    std::string config_path;
    auto* run = app.add_subcommand("run", "Run an experiment and write its artifacts");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();
    auto* validate = app.add_subcommand("validate", "Check a config and print its resolved form");
    validate->add_option("config", config_path, "Experiment config (JSON)")->required();
    std::string preset_name;
    auto* presets = app.add_subcommand("presets", "List built-in presets, or print one as a config");
    presets->add_option("name", preset_name, "Preset to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, o);
        if (validate->parsed()) return cmd_validate(config_path, o);
        return cmd_presets(preset_name);
    } catch (const geomorph::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitConfig;
    } catch (const geomorph::InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const geomorph::NumericalInstability& e) {
        std::cerr << "numerical instability: " << e.what() << '\n';
        return kExitInstability;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOther;
    }
}
