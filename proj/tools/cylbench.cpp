#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cylarm/commands.hpp"

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cylindrical arm control workbench"};
    app.require_subcommand(0, 1);

    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults, "Print the complete default config as JSON");

    cylarm::SimulateOptions sim;
    std::string sim_config, sim_out;
    auto* simulate = app.add_subcommand("simulate", "Run one scenario with one controller");
    simulate->add_option("--scenario", sim.scenario, "Scenario name")->required();
    simulate->add_option("--controller", sim.controller, "pd | smc | asmc-nn")->required();
    simulate->add_option("--config", sim_config, "JSON config file");
    simulate->add_option("--out", sim_out, "Output directory");

    cylarm::CompareOptions cmp;
    std::vector<std::string> cmp_controllers;
    std::string cmp_config, cmp_out;
    auto* compare = app.add_subcommand("compare", "Run several controllers on one scenario");
    compare->add_option("--scenario", cmp.scenario, "Scenario name")->required();
    compare->add_option("--controllers", cmp_controllers, "Comma-separated list, e.g. smc,asmc-nn")->required();
    compare->add_option("--config", cmp_config, "JSON config file");
    compare->add_option("--out", cmp_out, "Output directory");

    std::string verify_config;
    auto* verify = app.add_subcommand("verify", "Run the built-in verification checks");
    verify->add_option("--config", verify_config, "JSON config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cylarm::kExitConfig;
    }

    auto optional_path = [](const std::string& s) -> std::optional<std::filesystem::path> {
        if (s.empty()) return std::nullopt;
        return std::filesystem::path(s);
    };

    if (print_defaults) return cylarm::cmd_print_defaults(std::cout);
    if (simulate->parsed()) {
        sim.config = optional_path(sim_config);
        sim.out_dir = optional_path(sim_out);
        return cylarm::cmd_simulate(sim, std::cout, std::cerr);
    }
    if (compare->parsed()) {
        cmp.controllers = split_list(cmp_controllers);
        cmp.config = optional_path(cmp_config);
        cmp.out_dir = optional_path(cmp_out);
        return cylarm::cmd_compare(cmp, std::cout, std::cerr);
    }
    if (verify->parsed()) return cylarm::cmd_verify(optional_path(verify_config), std::cout, std::cerr);

    std::cerr << app.help();
    return cylarm::kExitConfig;
}
