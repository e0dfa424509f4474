#include <CLI11.hpp>

#include <fstream>
#include <map>
#include <iostream>

#include "commands.hpp"
#include "logman/error.hpp"
#include "logman/nonexistence.hpp"

using namespace logman;
using namespace logman::cli;

int main(int argc, char** argv) {
    CLI::App app{"logman: radial logistic equations on model manifolds"};
    app.require_subcommand(1);

    const std::map<std::string, std::string> about{
        {"eigen", "bottom of the spectrum of -Delta - a on a ball"},
        {"lambda-star", "lambda_1 over growing balls and its limit"},
        {"duality", "spectral bottom versus positivity of the mu-problem"},
        {"solve", "Dirichlet problem by monotone iteration"},
        {"blowup", "large solution on a ball (boundary data to infinity)"},
        {"maximal", "maximal solution by exhaustion"},
        {"subsolution", "glued compactly supported sub-solution"},
        {"exists", "existence condition over radii, optional solve"},
        {"nonexist", "hypothesis certificate of a non-existence result"},
        {"compare", "comparison rule against the k/(1+r^2) family"},
        {"green", "Green kernel of the model"},
        {"poisson", "radial Poisson solve and log substitution"},
        {"sweep", "run the scenario command over values of one scalar key"},
    };
    std::string config, out_dir = ".", param, values, theorem;
    int mesh = 0;
    double tol = 0.0;

    for (const auto& name : command_names()) {
        auto* sub = app.add_subcommand(name, about.at(name));
        sub->add_option("--config", config, "scenario file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "existing output directory");
        sub->add_option("--mesh", mesh, "interior nodes")->check(CLI::PositiveNumber);
        sub->add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
        if (name == "nonexist")
            sub->add_option("--theorem", theorem, "3.2, 3.3, lemma3.1, 3.2prime, cor3.17 or cor3.2pp");
        if (name == "sweep") {
            sub->add_option("--param", param, "scalar key, e.g. params.lambda")->required();
            sub->add_option("--values", values, "comma list or lo:step:hi")->required();
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        Scenario s = parse_scenario(config);
        if (mesh > 0) set_scalar(s, "solver.mesh", mesh);
        if (tol > 0.0) set_scalar(s, "solver.tol", tol);
        if (!theorem.empty()) {
            theorem_from_string(theorem);
            s.theorem = theorem;
        }

        if (!std::filesystem::is_directory(out_dir))
            throw ConfigError("output directory '" + out_dir + "' does not exist");
        if (command == "sweep") {
            const auto csv = sweep(s, param, parse_values(values));
            std::ofstream(std::filesystem::path(out_dir) / "sweep.csv", std::ios::binary) << csv;
            std::cout << csv;
            return exit_ok;
        }
        if (!s.command.empty() && s.command != command)
            std::cerr << "note: scenario declares command '" << s.command << "', running '" << command << "'\n";
        const int code = run_scenario(s, command, out_dir);
        std::ifstream report(std::filesystem::path(out_dir) / (command + "_report.txt"));
        std::cout << report.rdbuf();
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error:\n" << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}
