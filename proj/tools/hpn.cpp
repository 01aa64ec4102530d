#include <iostream>

#include <CLI11.hpp>

#include "hpn/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Bi-Hamiltonian curve flows in quaternionic projective space"};
    app.require_subcommand(1);
    hpn::CommandOptions o;
    std::string config;
    std::uint64_t seed = 0;
    std::string out;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "RunConfig JSON file")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "seed for random presets and suites");
        sub->add_option("--out", out, "output directory (overrides output.directory)");
    };
    CLI::App* verify = app.add_subcommand("verify", "run the property suites");
    add_common(verify);
    verify->add_option("--scope", o.scope, "algebra, operators, flows, geometry or all");
    verify->add_option("--lmax", o.lmax, "deepest hierarchy level in the density identity");
    CLI::App* simulate = app.add_subcommand("simulate", "integrate the configured flow");
    add_common(simulate);
    CLI::App* hierarchy = app.add_subcommand("hierarchy", "tabulate hierarchy flows and Hamiltonians");
    add_common(hierarchy);
    hierarchy->add_option("--lmax", o.lmax, "highest level (default 1)");
    CLI::App* reconstruct = app.add_subcommand("reconstruct", "reconstruct the frame and curve");
    add_common(reconstruct);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hpn::kExitConfig;
    }
    CLI::App* sub = app.get_subcommands().front();
    if (!config.empty()) o.config_path = config;
    if (sub->count("--seed")) o.seed = seed;
    if (!out.empty()) o.out = out;

    if (sub == verify) return hpn::cmd_verify(o, std::cout, std::cerr);
    if (sub == simulate) return hpn::cmd_simulate(o, std::cout, std::cerr);
    if (sub == hierarchy) return hpn::cmd_hierarchy(o, std::cout, std::cerr);
    return hpn::cmd_reconstruct(o, std::cout, std::cerr);
}
