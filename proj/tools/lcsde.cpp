#include "lcsde/geom_expr.hpp"
#include "lcsde/propsuites.hpp"
#include "lcsde/runner.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"lcsde: set-valued stochastic calculus toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "experiment config JSON")->required();

    std::string expression;
    auto* geom = app.add_subcommand("geom", "evaluate a set-calculator expression");
    geom->add_option("expression", expression, "expression over set literals")->required();

    std::string suite;
    int cases = 100;
    std::uint64_t seed = 0;
    auto* prop = app.add_subcommand("proptest", "run a named property suite");
    prop->add_option("suite", suite, "suite name")->required();
    prop->add_option("--cases", cases, "number of randomized cases");
    prop->add_option("--seed", seed, "base seed");

    std::string report_path;
    auto* exp = app.add_subcommand("export", "export plotting tables from a solve report");
    exp->add_option("report", report_path, "report JSON produced by a solve run")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        lcsde::RunOutcome outcome = lcsde::run_experiment(config_path);
        if (outcome.exit_code != lcsde::kExitOk) {
            std::cerr << "error: " << outcome.message << "\n";
        } else {
            for (const auto& f : outcome.outputs) std::cout << f << "\n";
        }
        return outcome.exit_code;
    }

    if (geom->parsed()) {
        try {
            std::cout << lcsde::render_geom_value(lcsde::evaluate_geom_expression(expression))
                      << "\n";
            return lcsde::kExitOk;
        } catch (const lcsde::ParseError& e) {
            std::cerr << "parse error: " << e.what() << "\n";
            return lcsde::kExitValidation;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return lcsde::kExitValidation;
        }
    }

    if (prop->parsed()) {
        if (!lcsde::prop_suite_exists(suite)) {
            std::cerr << "unknown suite: " << suite << "\nknown suites:";
            for (const auto& name : lcsde::prop_suite_names()) std::cerr << " " << name;
            std::cerr << "\n";
            return lcsde::kExitValidation;
        }
        if (cases < 1) {
            std::cerr << "cases must be positive\n";
            return lcsde::kExitValidation;
        }
        lcsde::PropResult result = lcsde::run_prop_suite(suite, cases, seed);
        if (result.passed) {
            std::cout << "suite " << result.suite << ": " << result.cases << " cases passed\n";
            return lcsde::kExitOk;
        }
        std::cout << "suite " << result.suite << " FAILED at case "
                  << result.counterexample->case_index << " (size "
                  << result.counterexample->size << "): " << result.counterexample->description
                  << "\n";
        return lcsde::kExitPropFailure;
    }

    lcsde::RunOutcome outcome = lcsde::export_report(report_path);
    if (outcome.exit_code != lcsde::kExitOk) {
        std::cerr << "error: " << outcome.message << "\n";
    } else {
        for (const auto& f : outcome.outputs) std::cout << f << "\n";
    }
    return outcome.exit_code;
}
