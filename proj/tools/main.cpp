#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    double impact_multiplier = 0.0;
    bool impact_set = false;
    bool zero_noise = false;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_config = true) {
    if (with_config)
        cmd->add_option("--config", args.config_path, "experiment config file (json)");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "master seed override")
        ->each([&](const std::string&) { args.seed_set = true; });
    cmd->add_option("--threads", args.threads, "worker threads for path evaluation")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--zero-noise", args.zero_noise, "run with the price noise stream zeroed");
    cmd->add_option("--impact-multiplier", args.impact_multiplier,
                    "scale the inventory impact term in the price drift")
        ->each([&](const std::string&) { args.impact_set = true; });
}

perfmm::cli::Overrides to_overrides(const CommonArgs& args) {
    perfmm::cli::Overrides o;
    if (args.seed_set) o.seed = args.seed;
    if (args.impact_set) o.impact_multiplier = args.impact_multiplier;
    o.zero_noise = args.zero_noise;
    o.threads = args.threads;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"perfmm: market-making strategies on a performative price process"};
    app.require_subcommand(1);

    CommonArgs sweep_args, decompose_args, tune_args, validate_args;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "simulate the (strategy, gamma, xi) grid and write sweep.csv");
    add_common(sweep, sweep_args);
    CLI::App* decompose = app.add_subcommand(
        "decompose", "emit price-formation and session series for one cell");
    add_common(decompose, decompose_args);
    CLI::App* tune =
        app.add_subcommand("tune", "fit theta multipliers per cell and write thetas.csv");
    add_common(tune, tune_args);
    CLI::App* validate =
        app.add_subcommand("validate", "re-check ordering properties of an existing sweep.csv");
    add_common(validate, validate_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sweep->parsed())
            return perfmm::cli::cmd_sweep(perfmm::cli::load_config(sweep_args.config_path),
                                          sweep_args.out_dir, to_overrides(sweep_args));
        if (decompose->parsed())
            return perfmm::cli::cmd_decompose(
                perfmm::cli::load_config(decompose_args.config_path), decompose_args.out_dir,
                to_overrides(decompose_args));
        if (tune->parsed())
            return perfmm::cli::cmd_tune(perfmm::cli::load_config(tune_args.config_path),
                                         tune_args.out_dir, to_overrides(tune_args));
        if (validate->parsed()) return perfmm::cli::cmd_validate(validate_args.out_dir);
    } catch (const perfmm::cli::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
