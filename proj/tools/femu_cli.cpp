#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "femu/errors.hpp"
#include "femu/experiment.hpp"
#include "femu/kernels.hpp"

namespace fs = std::filesystem;

namespace {

femu::ExperimentConfig load(const std::string& path, const std::optional<std::uint64_t>& seed) {
    femu::ExperimentConfig c = femu::load_experiment_config(path);
    if (seed) c.set_seed(*seed);
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"femu: finite-element model updating by frequency matching"};
    app.require_subcommand(1);

    int verbosity = 0;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    app.add_flag("-v,--verbose", verbosity, "Print progress (repeat for more)");

    auto* run = app.add_subcommand("run", "Run one updating experiment");
    std::string config_path;
    run->add_option("config", config_path, "Experiment JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Override the experiment seed");
    run->add_option("-o,--out", out_dir, "Output directory (default: from the config)");

    auto* compare = app.add_subcommand("compare", "Run several experiments on the same problem");
    std::vector<std::string> config_paths;
    compare->add_option("configs", config_paths, "Experiment JSON files")
        ->required()
        ->check(CLI::ExistingFile);
    compare->add_option("--seed", seed, "Override every experiment seed");
    compare->add_option("-o,--out", out_dir, "Output directory")->required();

    auto* validate = app.add_subcommand("validate-config", "Parse and check an experiment file");
    std::string validate_path;
    validate->add_option("config", validate_path, "Experiment JSON file")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (verbosity > 0)
            std::fprintf(stderr, "kernels: %s\n",
                         std::string(femu::kernels::isa_name(femu::kernels::active_isa())).c_str());
        if (*run) {
            const auto config = load(config_path, seed);
            if (verbosity > 0) fmt::print(stderr, "running {} ({})\n", config.name, femu::to_string(config.optimizer));
            const auto report = femu::run_experiment(config);
            const fs::path dir = out_dir.empty() ? config.output_dir : fs::path(out_dir);
            const auto files = femu::emit_report(report, dir);
            fmt::print("{}", femu::format_report(report));
            if (verbosity > 0)
                for (const auto& f : files) fmt::print(stderr, "wrote {}\n", f.string());
        } else if (*compare) {
            std::vector<femu::ExperimentConfig> configs;
            for (const auto& p : config_paths) configs.push_back(load(p, seed));
            const auto report = femu::compare_optimizers(configs);
            femu::emit_comparison(report, out_dir);
            for (std::size_t i = 0; i < report.rows.size(); ++i)
                femu::emit_report(report.rows[i], fs::path(out_dir) / report.rows[i].name);
            fmt::print("{}", femu::format_comparison(report));
        } else if (*validate) {
            const auto config = femu::load_experiment_config(validate_path);
            fmt::print("ok: {} ({}, {} elements, {} target modes)\n", config.name,
                       femu::to_string(config.optimizer), config.structure.element_count(),
                       config.target_frequencies.size());
        }
    } catch (const femu::ConfigError& ex) {
        fmt::print(stderr, "config error: {}\n", ex.what());
        return 2;
    } catch (const std::exception& ex) {
        fmt::print(stderr, "error: {}\n", ex.what());
        return 1;
    }
    return 0;
}
