#include <iostream>

#include "CLI11.hpp"
#include "hydro/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Hydrodynamic-type systems: checks, symmetries, solution series and hodograph solves"};
    app.require_subcommand(1);
    hydro::cli::Invocation inv;
    double tol = 0.0;
    std::uint64_t seed = 0;
    for (const char* name : hydro::cli::kCommands) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", inv.config_path, "configuration file (JSON)")->required();
        sub->add_option("--out", inv.out_dir, "output directory");
        sub->add_option("--tol", tol, "pass threshold for the task's residual");
        sub->add_option("--seed", seed, "sampling seed");
        sub->add_option("--threads", inv.threads, "worker threads for grid solves");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (auto* sub : app.get_subcommands()) {
        inv.command = sub->get_name();
        if (sub->count("--tol")) inv.tol = tol;
        if (sub->count("--seed")) inv.seed = seed;
    }
    return hydro::cli::run(inv, std::cout);
}
