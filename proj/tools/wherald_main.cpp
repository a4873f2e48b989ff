#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "wherald/errors.hpp"
#include "wherald/scenario.hpp"
#include "wherald/version.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& output_override,
                int nmax_override, int seed_override, bool seed_given,
                const std::string& format) {
    wherald::ScenarioConfig config = wherald::load_scenario_config(config_path);
    if (nmax_override > 0) wherald::override_truncation(config, nmax_override);
    if (seed_given) config.seed = seed_override;
    // the destination is delivery detail, not scenario content: it must not
    // change the report bytes, so it never enters the config echo
    const std::string destination =
        !output_override.empty() ? output_override : config.output;

    const nlohmann::ordered_json report = wherald::run_scenario(config);
    const std::string rendered = format == "text" ? wherald::render_report_text(report)
                                                  : wherald::render_report_machine(report);
    if (destination.empty()) {
        std::cout << rendered;
    } else {
        wherald::write_file_atomic(destination, rendered);
        if (const char* log = std::getenv("WHERALD_LOG"); log && std::string(log) == "1")
            std::cerr << "report written to " << destination << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heralded W-state preparation simulator"};
    app.set_version_flag("--version", std::string(wherald::kEngineVersion));

    std::string config_path;
    std::string output_override;
    std::string format = "machine";
    int nmax_override = 0;
    int seed_override = 0;

    CLI::App* run = app.add_subcommand("run", "Run a scenario described by a JSON config");
    run->add_option("config", config_path, "Path to the scenario config")->required();
    run->add_option("--output", output_override, "Write the report to this path instead of stdout");
    run->add_option("--nmax", nmax_override, "Override the photon truncation")
        ->check(CLI::PositiveNumber);
    CLI::Option* seed_opt =
        run->add_option("--seed", seed_override, "Random seed (reserved, echoed into the report)");
    run->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"machine", "text"}));
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        return run_command(config_path, output_override, nmax_override, seed_override,
                           static_cast<bool>(*seed_opt), format);
    } catch (const wherald::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const wherald::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
