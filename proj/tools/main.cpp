#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "minshare/errors.hpp"
#include "minshare/experiment.hpp"
#include "minshare/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSpecError = 2;
constexpr int kExitEngineError = 3;
constexpr int kExitIoError = 4;

struct CliArgs {
    std::string spec_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool quiet = false;
};

void add_common_options(CLI::App* cmd, CliArgs& args) {
    cmd->add_option("--spec", args.spec_path, "experiment spec file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides the spec)");
    cmd->add_option("--seed", args.seed, "override the spec's first seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("minshare ") + minshare::kVersion +
                 " - distributed hypothesis testing over agent networks "
                 "(min-rule belief updates, full and partial sharing)"};
    app.require_subcommand(1);

    CliArgs args;
    auto* run_cmd = app.add_subcommand("run", "simulate each seed; write trajectory and metrics CSVs");
    auto* compare_cmd =
        app.add_subcommand("compare", "run all three sharing rules on identical draws; write CSVs and SVG plots");
    auto* validate_cmd =
        app.add_subcommand("validate", "check connectivity, identifiability and KL bounds");
    auto* plot_cmd = app.add_subcommand("plot", "re-render SVGs from existing comparison CSVs");
    for (auto* cmd : {run_cmd, compare_cmd, validate_cmd, plot_cmd})
        add_common_options(cmd, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitSpecError;
    }

    try {
        const minshare::ExperimentSpec spec = minshare::parse_spec(args.spec_path);
        minshare::RunOptions opts;
        opts.out_override = args.out_dir;
        if (args.seed_set) opts.seed_override = args.seed;
        opts.quiet = args.quiet;

        if (run_cmd->parsed()) return minshare::cmd_run(spec, opts);
        if (compare_cmd->parsed()) return minshare::cmd_compare(spec, opts);
        if (validate_cmd->parsed()) return minshare::cmd_validate(spec, opts);
        return minshare::cmd_plot(spec, opts);
    } catch (const minshare::SpecError& e) {
        std::cerr << "spec error: " << e.what() << '\n';
        return kExitSpecError;
    } catch (const minshare::IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const minshare::EngineError& e) {
        std::cerr << "engine error: " << e.what() << '\n';
        return kExitEngineError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "spec error: " << e.what() << '\n';
        return kExitSpecError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEngineError;
    }
}
