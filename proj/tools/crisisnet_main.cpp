// crisisnet — threshold-cascade crisis spreading on macroeconomic trade networks.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "crisisnet/runner.hpp"

namespace {

using crisisnet::RunConfig;

void add_dataset_options(CLI::App* cmd, RunConfig& config, std::string& mode) {
    cmd->add_option("--countries", config.countries_path, "country CSV (code,name,continent,gdp_musd[,cab_musd])")
        ->required();
    cmd->add_option("--trades", config.trades_path, "trade CSV (exporter,importer,volume_musd)")
        ->required();
    cmd->add_option("--capacity-mode", mode, "node capacity: gdp or gdp-cab")
        ->check(CLI::IsMember({"gdp", "gdp-cab"}))
        ->default_val("gdp");
    cmd->add_flag("--lenient", config.lenient,
                  "drop trade rows with unknown endpoints instead of failing");
}

void add_param_options(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--f", config.f, "fraction of link weight removed by a collapse (default 0.7)");
    cmd->add_option("--t", config.t, "collapse threshold as fraction of capacity (default 0.1)");
    cmd->add_option("--ft-ratio", config.ft_ratio,
                    "set f and t from their ratio (t=0.1,f=0.1r for r<=10; else f=1,t=1/r)");
}

void add_common_options(CLI::App* cmd, RunConfig& config) {
    cmd->add_option("--rng-seed", config.rng_seed, "master RNG seed (default 0; never wall-clock)");
    cmd->add_option("--out", config.out_dir, "output directory")->default_val(".");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"threshold-cascade model of crisis spreading on trade networks"};
    app.require_subcommand(1);

    RunConfig config;
    std::string mode = "gdp";
    std::string model = "gsn";

    CLI::App* validate = app.add_subcommand("validate", "check a dataset and report all issues");
    add_dataset_options(validate, config, mode);

    CLI::App* avalanche =
        app.add_subcommand("avalanche", "run cascades and write results/events CSVs");
    add_dataset_options(avalanche, config, mode);
    add_param_options(avalanche, config);
    add_common_options(avalanche, config);
    avalanche->add_option("--seed", config.seed, "seed country code, or ALL")->default_val("ALL");
    avalanche->add_flag("--events", config.with_events, "also write per-collapse events.csv");

    CLI::App* sweep = app.add_subcommand("sweep", "scan f/t ratios and locate the critical regime");
    add_dataset_options(sweep, config, mode);
    add_common_options(sweep, config);
    sweep->add_option("--grid-lo", config.grid_lo, "lowest ratio")->default_val(1.0);
    sweep->add_option("--grid-hi", config.grid_hi, "highest ratio")->default_val(30.0);
    sweep->add_option("--grid-points", config.grid_points, "grid size")->default_val(30);
    sweep->add_option("--ratios", config.ratios, "explicit ratio list (overrides the grid)");

    CLI::App* topology =
        app.add_subcommand("topology", "spanning forest, avalanche network, continental mix");
    add_dataset_options(topology, config, mode);
    add_param_options(topology, config);
    add_common_options(topology, config);
    topology->add_option("--events-file", config.events_path,
                         "events.csv from a previous avalanche run");
    topology->add_flag("--recompute", config.recompute, "re-run the cascades instead");

    CLI::App* randomize =
        app.add_subcommand("randomize", "null-model ensembles and empirical p-values");
    add_dataset_options(randomize, config, mode);
    add_param_options(randomize, config);
    add_common_options(randomize, config);
    randomize->add_option("--model", model, "gsn (partner shuffling) or gdn (unit-link redistribution)")
        ->check(CLI::IsMember({"gsn", "gdn"}))
        ->default_val("gsn");
    randomize->add_option("--samples", config.samples, "ensemble size")->default_val(100);
    randomize->add_flag("--raw-csv", config.raw_samples_csv, "also write per-sample statistics CSV");
    randomize->add_option("--gsn-tolerance", config.gsn_tolerance,
                          "relative weight tolerance for swap acceptance")
        ->default_val(0.01);
    randomize->add_option("--gsn-max-swaps", config.gsn_max_swaps,
                          "accepted-swap budget (0 = 20x links)");
    randomize->add_option("--gsn-max-attempts", config.gsn_max_attempts,
                          "attempt budget (0 = 200x links)");

    CLI::App* report = app.add_subcommand("report", "full deterministic analysis bundle");
    add_dataset_options(report, config, mode);
    add_param_options(report, config);
    add_common_options(report, config);
    report->add_option("--tgp", config.tgp_codes, "country codes to export trade-gdp profiles for");
    report->add_option("--samples", config.report_samples,
                       "null-model ensemble size per model (0 = skip ensembles)")
        ->default_val(0);

    CLI11_PARSE(app, argc, argv);

    try {
        config.mode = crisisnet::capacity_mode_from_string(mode);
        if (randomize->parsed())
            config.model = model == "gdn" ? crisisnet::NullModel::GDN : crisisnet::NullModel::GSN;

        if (validate->parsed()) return crisisnet::cmd_validate(config);
        if (avalanche->parsed()) return crisisnet::cmd_avalanche(config);
        if (sweep->parsed()) return crisisnet::cmd_sweep(config);
        if (topology->parsed()) return crisisnet::cmd_topology(config);
        if (randomize->parsed()) return crisisnet::cmd_randomize(config);
        if (report->parsed()) return crisisnet::cmd_report(config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
