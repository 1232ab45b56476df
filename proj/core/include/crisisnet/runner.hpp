#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crisisnet/cascade.hpp"
#include "crisisnet/macro_net.hpp"
#include "crisisnet/randomize.hpp"

namespace crisisnet {

// Parsed CLI state shared by all commands. Only the fields a command reads
// are meaningful for it.
struct RunConfig {
    std::string countries_path;
    std::string trades_path;
    CapacityMode mode = CapacityMode::GDP_ONLY;
    bool lenient = false;

    std::optional<double> f, t, ft_ratio; // ft_ratio realized first, f/t override
    std::uint64_t rng_seed = 0;
    std::string out_dir = ".";

    // avalanche
    std::string seed = "ALL";
    bool with_events = false;

    // sweep
    double grid_lo = 1.0, grid_hi = 30.0;
    int grid_points = 30;
    std::vector<double> ratios; // explicit grid overrides lo/hi/points

    // topology
    std::string events_path; // rebuild avalanche network from this events.csv
    bool recompute = false;  // ...or re-run the cascade

    // randomize
    NullModel model = NullModel::GSN;
    int samples = 100;
    bool raw_samples_csv = false;
    double gsn_tolerance = 0.01;
    std::uint64_t gsn_max_swaps = 0;    // 0 -> default 20|E|
    std::uint64_t gsn_max_attempts = 0; // 0 -> default 200|E|

    // report
    std::vector<std::string> tgp_codes;
    int report_samples = 0; // > 0 adds GSN/GDN ensemble JSONs to the bundle
};

CascadeParams resolve_params(const RunConfig& config);

// Loads + validates the dataset; throws with a full issue list on errors.
MacroNet load_network(const RunConfig& config, std::vector<Issue>* warnings = nullptr);

// Each command returns a process exit status (0 ok, nonzero on errors) and
// writes its artifacts under config.out_dir.
int cmd_validate(const RunConfig& config);
int cmd_avalanche(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_topology(const RunConfig& config);
int cmd_randomize(const RunConfig& config);
int cmd_report(const RunConfig& config);

} // namespace crisisnet
