#include <iforge/commands.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>

namespace {

void add_common(CLI::App* cmd, iforge::commands::CommonOptions& options) {
    cmd->add_option("--config", options.config_path, "JSON experiment configuration");
    cmd->add_option("--out", options.out_path, "output file (default: stdout)");
    cmd->add_option("--species", options.species, "boson or fermion")
        ->check(CLI::IsMember({"boson", "fermion"}));
    cmd->add_option("--seed", options.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"post-selected multi-qudit states from scattered bosons and fermions"};
    app.require_subcommand(1);

    iforge::commands::CommonOptions simulate_options;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "compile a setup, scatter the input, post-select and report the state");
    add_common(simulate, simulate_options);

    iforge::commands::FamilyOptions family_options;
    CLI::App* family = app.add_subcommand(
        "family", "sweep the tunable four-photon setup and compare with the closed form");
    add_common(family, family_options);
    family->add_option("--steps", family_options.steps, "sweep points on [0, pi/4] (default 33)");

    iforge::commands::GhzSwapOptions ghz_options;
    CLI::App* ghz = app.add_subcommand(
        "ghz-swap", "project three entangled pairs onto a GHZ state and read the partner photons");
    add_common(ghz, ghz_options);
    ghz->add_option("--min-fidelity", ghz_options.min_fidelity,
                    "fail (exit 3) when the conditional fidelity drops below this");

    iforge::commands::Table2Options table_options;
    CLI::App* table = app.add_subcommand(
        "table2", "Jacobian-rank dimensionality of the accessible-state manifolds");
    add_common(table, table_options);
    table->add_option("--d", table_options.d, "internal dimension");
    table->add_option("--N", table_options.n_range, "particle number or range, e.g. 4 or 2..7");
    table->add_option("--json", table_options.json_path, "also write JSON rows with spectra");
    table->add_option("--trials", table_options.trials, "random draws per cell (default 5)");
    table->add_flag("--timings", table_options.timings,
                    "emit wall-clock seconds (off keeps output byte-stable)");

    iforge::commands::VerifyOptions verify_options;
    CLI::App* verify =
        app.add_subcommand("verify", "run the cross-module property and oracle suites");
    add_common(verify, verify_options);
    verify->add_option("--sizes", verify_options.sizes, "small, default or large")
        ->check(CLI::IsMember({"small", "default", "large"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return iforge::commands::cmd_simulate(simulate_options);
        if (family->parsed()) return iforge::commands::cmd_family(family_options);
        if (ghz->parsed()) return iforge::commands::cmd_ghz_swap(ghz_options);
        if (table->parsed()) return iforge::commands::cmd_table2(table_options);
        if (verify->parsed()) return iforge::commands::cmd_verify(verify_options);
    } catch (const iforge::SizeLimitError& e) {
        std::cerr << "size limit: " << e.what() << "\n";
        return iforge::commands::kExitSizeLimit;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return iforge::commands::kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return iforge::commands::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return iforge::commands::kExitPhysicsFailure;
    }
    return 0;
}
