// Command-line front end: construct | verify | spectrum | rayleigh |
// decay-fit | case-table, each driven by a structured-text config file.

#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "warpspec/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for warped-product spectral geometry"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    double tol_override = 0, rmax_override = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config)
            sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--tol", tol_override, "override solver tolerance");
        sub->add_option("--rmax", rmax_override, "override truncation radius");
    };

    add_common(app.add_subcommand("construct", "build a model manifold, emit profile + manifest"),
               true);
    add_common(app.add_subcommand("verify", "hypothesis, barrier and envelope verification"),
               true);
    add_common(app.add_subcommand("spectrum", "discrete spectrum and ground state"), true);
    add_common(app.add_subcommand("rayleigh", "quadratic-form sweep for low eigenvalues"), true);
    add_common(app.add_subcommand("decay-fit", "fit decay rate and log-prefactor of a solution"),
               true);
    add_common(app.add_subcommand("case-table", "emit the growth-rate case reference table"),
               false);

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    std::string command = sub->get_name();

    warpspec::ExperimentConfig cfg;
    try {
        if (command != "case-table")
            cfg = warpspec::ExperimentConfig::parse(warpspec::detail::read_file(config_path));
        if (tol_override > 0) cfg.kv["tol"] = {warpspec::detail::fmt_double(tol_override)};
        if (rmax_override > 0) cfg.kv["rmax"] = {warpspec::detail::fmt_double(rmax_override)};
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    std::string message;
    int code = warpspec::run_command(command, cfg, out_dir, message);
    std::printf("%s\n", message.c_str());
    return code;
}
