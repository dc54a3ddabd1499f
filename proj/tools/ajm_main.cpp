#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "ajm/cli.hpp"

namespace {

struct SubSpec {
    const char* name;
    const char* help;
};

constexpr SubSpec kSubcommands[] = {
    {"sweep-aprime", "sweep margin sharpness a', b' over detector widths"},
    {"post-state", "conditional post-measurement state for one outcome"},
    {"fidelities", "transmission, estimation, and disturbance fidelities"},
    {"oblique", "outcome probabilities of the oblique-axis observable"},
    {"three-sweep", "Monte-Carlo sweep of three-detector margin sharpness"},
    {"ft-check", "distance-sum joint-measurability check for three directions"},
    {"jm-check", "validity verdict for explicit joint-observable parameters"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Approximate joint measurement of qubit observables"};
    app.require_subcommand(1);

    ajm::cli::CliOptions opt;
    std::uint64_t seed = 0;
    std::string command;

    for (const SubSpec& spec : kSubcommands) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        sub->add_option("--config", opt.config_path, "JSON run configuration")->required();
        sub->add_option("--out", opt.out_dir, "output directory (default: current)");
        CLI::Option* seed_opt = sub->add_option("--seed", seed, "RNG seed (overrides config)");
        sub->add_option("--threads", opt.threads, "worker threads (default 1)");
        std::string name = spec.name;
        sub->callback([&, name, seed_opt]() {
            command = name;
            if (seed_opt->count() > 0) opt.seed = seed;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    return ajm::cli::dispatch(command, opt, std::cerr);
}
