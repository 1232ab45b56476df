#include "crisisnet/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "crisisnet/csv_io.hpp"
#include "crisisnet/exports.hpp"
#include "crisisnet/sha256.hpp"

namespace crisisnet {

namespace fs = std::filesystem;
using nlohmann::json;

CascadeParams resolve_params(const RunConfig& config) {
    CascadeParams params; // defaults: f = 0.7, t = 0.1 (critical ratio 7)
    if (config.ft_ratio) params = CascadeParams::from_ratio(*config.ft_ratio);
    if (config.f) params.f = *config.f;
    if (config.t) params.t = *config.t;
    params.validate();
    return params;
}

MacroNet load_network(const RunConfig& config, std::vector<Issue>* warnings) {
    auto countries = load_countries_file(config.countries_path);
    auto trades = load_trades_file(config.trades_path);
    return MacroNet::build(std::move(countries), trades, config.mode, config.lenient, warnings);
}

namespace {

void write_text_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path.string());
    out << content;
    if (!out) throw Error("short write: " + path.string());
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
    std::ostringstream os;
    fn(os);
    write_text_file(path, os.str());
}

long percent(const IntraFraction& f) {
    return f.fraction ? std::lround(100.0 * *f.fraction) : 0;
}

json summary_json(const MacroNet& net, CascadeParams params,
                  const std::map<std::string, AvalancheResult>& results) {
    const SummaryStats stats = summary_stats(results);
    const AvalancheNetwork avnet = avalanche_network(results);
    const auto continents = continent_map(net);
    const IntraFraction av_if = intra_continental_fraction(avnet.edges, continents);
    const SpanningForest forest = max_spanning_forest(net);
    std::vector<std::pair<std::string, std::string>> forest_edges;
    for (const ForestEdge& e : forest.edges) forest_edges.emplace_back(e.a, e.b);
    const IntraFraction f_if = intra_continental_fraction(forest_edges, continents);

    json doc;
    doc["n_countries"] = net.n();
    doc["n_links"] = net.link_count();
    doc["capacity_mode"] = to_string(net.capacity_mode());
    doc["params"] = json{{"f", params.f}, {"t", params.t}, {"ratio", params.ratio()}};
    json sum;
    sum["sum_sizes"] = stats.sum_sizes;
    if (stats.typical_nonzero)
        sum["typical_nonzero"] = *stats.typical_nonzero;
    else
        sum["typical_nonzero"] = nullptr;
    sum["likelihood"] = stats.likelihood;
    sum["n_nonzero"] = stats.n_nonzero;
    doc["summary"] = sum;

    // GDP vs avalanche size rank correlation (undefined when sizes constant)
    std::vector<double> gdps, sizes;
    for (int i = 0; i < net.n(); ++i) {
        gdps.push_back(net.country(i).gdp);
        const auto it = results.find(net.country(i).code);
        sizes.push_back(it == results.end() ? 0.0 : static_cast<double>(it->second.size));
    }
    try {
        const SpearmanResult rho = spearman_gdp_avalanche(gdps, sizes);
        doc["spearman"] = json{{"rho", rho.rho}, {"p_value", rho.p_value}};
    } catch (const Error& e) {
        doc["spearman"] = json{{"rho", nullptr}, {"p_value", nullptr}, {"note", e.what()}};
    }

    json av;
    av["edges"] = avnet.edges.size();
    av["intra"] = av_if.intra;
    av["fraction"] = av_if.fraction ? json(*av_if.fraction) : json(nullptr);
    av["isolated"] = avnet.isolated;
    doc["avalanche_network"] = av;
    json fo;
    fo["edges"] = forest.edges.size();
    fo["components"] = forest.n_components;
    fo["intra"] = f_if.intra;
    fo["fraction"] = f_if.fraction ? json(*f_if.fraction) : json(nullptr);
    doc["spanning_forest"] = fo;
    return doc;
}

} // namespace

int cmd_validate(const RunConfig& config) {
    std::ifstream cin_(config.countries_path, std::ios::binary);
    if (!cin_) throw Error("cannot open countries file: " + config.countries_path);
    std::ifstream tin(config.trades_path, std::ios::binary);
    if (!tin) throw Error("cannot open trades file: " + config.trades_path);

    auto countries = load_countries(cin_);
    auto trades = load_trades(tin);
    std::vector<Issue> issues;
    for (const Issue& i : countries.issues) issues.push_back(i);
    for (const Issue& i : trades.issues) issues.push_back(i);

    long n_links = static_cast<long>(trades.rows.size());
    if (countries.ok() && trades.ok()) {
        try {
            std::vector<Issue> build_warnings;
            const MacroNet net =
                MacroNet::build(countries.rows, trades.rows, config.mode, config.lenient,
                                &build_warnings);
            for (const Issue& i : build_warnings) issues.push_back(i);
            n_links = net.link_count();
        } catch (const Error& e) {
            issues.push_back({0, Issue::Severity::ERROR, e.what()});
        }
    }

    int errors = 0;
    for (const Issue& i : issues) {
        std::cout << format_issue(i) << '\n';
        if (i.severity == Issue::Severity::ERROR) ++errors;
    }
    std::cout << countries.rows.size() << " countries, " << n_links << " links, " << errors
              << (errors == 1 ? " error" : " errors") << '\n';
    return errors > 0 ? 1 : 0;
}

int cmd_avalanche(const RunConfig& config) {
    const MacroNet net = load_network(config);
    const CascadeParams params = resolve_params(config);
    const fs::path out(config.out_dir);

    std::map<std::string, AvalancheResult> results;
    if (config.seed == "ALL") {
        results = run_all(net, params);
    } else {
        AvalancheResult r = run_avalanche(net, config.seed, params);
        results.emplace(config.seed, std::move(r));
    }

    write_with(out / "results.csv", [&](std::ostream& os) { write_results_csv(os, results); });
    if (config.with_events)
        write_with(out / "events.csv", [&](std::ostream& os) { write_events_csv(os, results); });

    if (config.seed == "ALL") {
        const CumulativeCurve curve = cumulative_size_counts(results);
        write_with(out / "distribution.csv",
                   [&](std::ostream& os) { write_distribution_csv(os, curve); });
        write_text_file(out / "summary.json", summary_json(net, params, results).dump(2) + "\n");
        const SummaryStats stats = summary_stats(results);
        std::cout << "all seeds: sum " << stats.sum_sizes << ", typical "
                  << (stats.typical_nonzero ? format_double(*stats.typical_nonzero) : "undefined")
                  << ", likelihood " << format_double(stats.likelihood) << '\n';
    } else {
        const AvalancheResult& r = results.at(config.seed);
        std::cout << "seed " << r.seed << ": size " << r.size << ", duration " << r.duration
                  << '\n';
    }
    return 0;
}

int cmd_sweep(const RunConfig& config) {
    const MacroNet net = load_network(config);
    const std::vector<double> grid =
        config.ratios.empty() ? log_ratio_grid(config.grid_lo, config.grid_hi, config.grid_points)
                              : config.ratios;
    const SweepResult result = sweep(net, grid);
    const fs::path out(config.out_dir);
    write_with(out / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, result); });

    if (result.critical_ratio) {
        std::cout << "critical ratio estimate: " << format_double(*result.critical_ratio)
                  << (result.low_confidence ? " (low confidence)" : "") << '\n';
    } else {
        std::cout << "critical ratio estimate: none (no usable tail fits; low confidence)\n";
    }
    std::cout << "subcritical (max < 5% of N) up to ratio "
              << (result.subcritical_max_ratio ? format_double(*result.subcritical_max_ratio)
                                               : std::string("none"))
              << "; supercritical (max > 50% of N) from ratio "
              << (result.supercritical_min_ratio ? format_double(*result.supercritical_min_ratio)
                                                 : std::string("none"))
              << '\n';
    return 0;
}

int cmd_topology(const RunConfig& config) {
    const MacroNet net = load_network(config);
    const auto continents = continent_map(net);

    std::map<std::string, AvalancheResult> results;
    if (!config.events_path.empty()) {
        std::ifstream in(config.events_path, std::ios::binary);
        if (!in) throw Error("cannot open events file: " + config.events_path);
        std::vector<std::string> codes;
        for (const Country& c : net.countries()) codes.push_back(c.code);
        results = results_from_events(codes, read_events_csv(in));
    } else if (config.recompute) {
        results = run_all(net, resolve_params(config));
    } else {
        throw Error("topology needs --events-file <events.csv> or --recompute");
    }

    const SpanningForest forest = max_spanning_forest(net);
    std::vector<std::pair<std::string, std::string>> forest_edges;
    for (const ForestEdge& e : forest.edges) forest_edges.emplace_back(e.a, e.b);
    const IntraFraction f_if = intra_continental_fraction(forest_edges, continents);
    const AvalancheNetwork avnet = avalanche_network(results);
    const IntraFraction av_if = intra_continental_fraction(avnet.edges, continents);

    const fs::path out(config.out_dir);
    write_with(out / "spanning_forest.dot",
               [&](std::ostream& os) { write_forest_dot(os, forest, continents); });
    write_with(out / "avalanche_network.dot",
               [&](std::ostream& os) { write_avalanche_dot(os, avnet, continents); });
    write_text_file(out / "intra_fractions.json", intra_to_json(f_if, av_if));
    write_text_file(out / "continental_flow.json",
                    coarse_to_json(coarse_grain_continental(avnet, continents)));

    std::cout << "spanning forest: " << f_if.intra << " out of " << f_if.total << " links ("
              << percent(f_if) << "%) intra-continental\n";
    std::cout << "avalanche network: " << av_if.intra << " out of " << av_if.total << " links ("
              << percent(av_if) << "%) intra-continental; " << avnet.isolated.size()
              << " isolated countries\n";
    return 0;
}

int cmd_randomize(const RunConfig& config) {
    const MacroNet net = load_network(config);
    const CascadeParams params = resolve_params(config);
    GsnConfig gsn_cfg;
    gsn_cfg.weight_tolerance = config.gsn_tolerance;
    gsn_cfg.max_accepted_swaps = config.gsn_max_swaps;
    gsn_cfg.max_attempts = config.gsn_max_attempts;

    const EnsembleSummary summary =
        ensemble(net, config.model, config.samples, params, config.rng_seed, &gsn_cfg);

    const fs::path out(config.out_dir);
    const std::string stem = to_string(summary.model);
    write_text_file(out / (stem + "_ensemble.json"), ensemble_to_json(summary));
    if (config.raw_samples_csv)
        write_with(out / (stem + "_samples.csv"),
                   [&](std::ostream& os) { write_ensemble_samples_csv(os, summary); });

    for (const StatSeries& s : summary.stats) {
        std::cout << s.name << ": mean " << format_double(s.mean) << " sd " << format_double(s.sd);
        if (s.observed_defined && s.n_defined > 0) {
            std::cout << " | observed " << format_double(s.observed) << " p_upper "
                      << format_p(s.p_upper) << " p_lower " << format_p(s.p_lower);
        }
        std::cout << '\n';
    }
    for (const std::string& e : summary.sample_errors) std::cout << "error: " << e << '\n';
    return summary.sample_errors.empty() ? 0 : 1;
}

namespace {

// One full analysis bundle for a single capacity mode; returns relative file
// paths written (for the manifest).
std::vector<std::string> report_mode(const RunConfig& config, const fs::path& out_root,
                                     const std::string& subdir, CapacityMode mode,
                                     std::vector<std::string>& errors) {
    RunConfig mode_config = config;
    mode_config.mode = mode;
    const MacroNet net = load_network(mode_config);
    const CascadeParams params = resolve_params(config);
    const auto continents = continent_map(net);
    const fs::path dir = out_root / subdir;

    std::vector<std::string> files;
    const auto emit = [&](const std::string& name, auto&& writer) {
        write_with(dir / name, writer);
        files.push_back(subdir + "/" + name);
    };

    const auto results = run_all(net, params);
    emit("results.csv", [&](std::ostream& os) { write_results_csv(os, results); });
    emit("events.csv", [&](std::ostream& os) { write_events_csv(os, results); });
    emit("distribution.csv", [&](std::ostream& os) {
        write_distribution_csv(os, cumulative_size_counts(results));
    });
    emit("durations.csv", [&](std::ostream& os) { write_durations_csv(os, results); });
    emit("profile_totals.csv",
         [&](std::ostream& os) { write_profile_totals_csv(os, results); });
    emit("gdp_size.csv", [&](std::ostream& os) { write_gdp_size_csv(os, net, results); });

    const SpanningForest forest = max_spanning_forest(net);
    const AvalancheNetwork avnet = avalanche_network(results);
    emit("spanning_forest.dot",
         [&](std::ostream& os) { write_forest_dot(os, forest, continents); });
    emit("avalanche_network.dot",
         [&](std::ostream& os) { write_avalanche_dot(os, avnet, continents); });

    std::vector<std::pair<std::string, std::string>> forest_edges;
    for (const ForestEdge& e : forest.edges) forest_edges.emplace_back(e.a, e.b);
    emit("intra_fractions.json", [&](std::ostream& os) {
        os << intra_to_json(intra_continental_fraction(forest_edges, continents),
                            intra_continental_fraction(avnet.edges, continents));
    });
    emit("continental_flow.json", [&](std::ostream& os) {
        os << coarse_to_json(coarse_grain_continental(avnet, continents));
    });
    emit("summary.json",
         [&](std::ostream& os) { os << summary_json(net, params, results).dump(2) << "\n"; });

    for (const std::string& code : config.tgp_codes) {
        const auto it = results.find(code);
        if (it == results.end()) {
            errors.push_back(subdir + ": tgp country '" + code + "' not in dataset");
            continue;
        }
        const auto points = tgp_profile(net, it->second);
        emit("tgp_" + code + ".csv", [&](std::ostream& os) { write_tgp_csv(os, points); });
    }

    if (config.report_samples > 0) {
        GsnConfig gsn_cfg;
        gsn_cfg.weight_tolerance = config.gsn_tolerance;
        gsn_cfg.max_accepted_swaps = config.gsn_max_swaps;
        gsn_cfg.max_attempts = config.gsn_max_attempts;
        for (const NullModel model : {NullModel::GSN, NullModel::GDN}) {
            try {
                const EnsembleSummary summary = ensemble(net, model, config.report_samples,
                                                         params, config.rng_seed, &gsn_cfg);
                emit(std::string(to_string(model)) + "_ensemble.json",
                     [&](std::ostream& os) { os << ensemble_to_json(summary); });
                for (const std::string& e : summary.sample_errors)
                    errors.push_back(subdir + "/" + to_string(model) + ": " + e);
            } catch (const Error& e) {
                errors.push_back(subdir + "/" + to_string(model) + ": " + e.what());
            }
        }
    }
    return files;
}

} // namespace

int cmd_report(const RunConfig& config) {
    const fs::path out(config.out_dir);
    std::vector<std::string> errors;
    std::vector<std::string> files;

    // GDP section always; GDP+CAB section when the dataset carries CAB for
    // every country.
    bool have_cab = true;
    {
        const auto countries = load_countries_file(config.countries_path);
        for (const Country& c : countries)
            if (!c.cab) have_cab = false;
    }
    for (const auto& f : report_mode(config, out, "gdp", CapacityMode::GDP_ONLY, errors))
        files.push_back(f);
    if (have_cab) {
        try {
            for (const auto& f :
                 report_mode(config, out, "gdp_cab", CapacityMode::GDP_PLUS_CAB, errors))
                files.push_back(f);
        } catch (const Error& e) {
            errors.push_back(std::string("gdp_cab: ") + e.what());
        }
    }

    json manifest;
    manifest["command"] = "report";
    json cfg;
    cfg["countries"] = fs::path(config.countries_path).filename().string();
    cfg["trades"] = fs::path(config.trades_path).filename().string();
    cfg["f"] = resolve_params(config).f;
    cfg["t"] = resolve_params(config).t;
    cfg["rng_seed"] = config.rng_seed;
    cfg["lenient"] = config.lenient;
    cfg["ensemble_samples"] = config.report_samples;
    cfg["capacity_modes"] = have_cab ? json::array({"gdp", "gdp-cab"}) : json::array({"gdp"});
    manifest["config"] = cfg;
    json file_entries;
    for (const std::string& rel : files) {
        const fs::path p = out / rel;
        file_entries[rel] = json{{"sha256", sha256_file_hex(p.string())},
                                 {"bytes", fs::file_size(p)}};
    }
    manifest["files"] = file_entries;
    manifest["errors"] = errors;
    write_text_file(out / "manifest.json", manifest.dump(2) + "\n");

    std::cout << "report written: " << (out / "manifest.json").string() << " (" << files.size()
              << " files";
    if (!errors.empty()) std::cout << ", " << errors.size() << " errors";
    std::cout << ")\n";
    return errors.empty() ? 0 : 1;
}

} // namespace crisisnet
