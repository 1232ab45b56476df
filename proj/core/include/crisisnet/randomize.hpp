#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crisisnet/analytics.hpp"
#include "crisisnet/cascade.hpp"
#include "crisisnet/macro_net.hpp"

namespace crisisnet {

struct GsnConfig {
    double weight_tolerance = 0.01; // relative difference accepted both ways
    std::uint64_t max_accepted_swaps = 0; // 0 -> 20 * |E|
    std::uint64_t max_attempts = 0;       // 0 -> 200 * |E|
    std::uint64_t rng_seed = 0;
};

struct GsnSample {
    MacroNet net;
    std::uint64_t accepted = 0;
    std::uint64_t attempts = 0;
    bool zero_acceptance = false; // budget exhausted without a single swap
    // attempt index (1-based) of each accepted swap; lets users check the
    // acceptance plateau
    std::vector<std::uint64_t> accepted_at;
};

// Globally-shuffled network: retargets importer slots between pairs of links
// whose (immutable) weights differ by less than the tolerance relative to
// both. Preserves every in/out degree, every exporter's weight multiset, and
// the global weight multiset exactly; importer-side weights change only
// within the tolerance per swapped slot.
GsnSample gsn_sample(const MacroNet& net, const GsnConfig& config);

struct GdnSample {
    MacroNet net;
    std::uint64_t total_units = 0;
    int dropped_links = 0; // links that rounded to zero units
    std::vector<Issue> warnings;
};

// Globally-distributed network: splits links into 1 M$ units (round half up)
// and rematches export units to import units uniformly at random, avoiding
// self-loops. Preserves per-country export and import unit totals exactly.
GdnSample gdn_sample(const MacroNet& net, std::uint64_t rng_seed);

enum class Tail { UPPER, LOWER };

struct EmpiricalP {
    double value = 1.0;
    bool is_bound = false; // true -> "p < value" (zero exceedances)
};

std::string format_p(const EmpiricalP& p);

// UPPER: fraction of samples >= observed; LOWER: <= observed. A zero count is
// reported as the bound 1/S instead of 0.
EmpiricalP empirical_p(double observed, const std::vector<double>& samples, Tail tail);

enum class NullModel { GSN, GDN };

const char* to_string(NullModel m);

// Per-statistic series over an ensemble. `values` is aligned with sample
// index; entries are NaN when the statistic was undefined for that sample
// (e.g. typical size with no avalanches). mean/sd/p are over defined entries.
struct StatSeries {
    std::string name;
    std::vector<double> values;
    int n_defined = 0;
    double mean = 0.0;
    double sd = 0.0; // population standard deviation
    double observed = 0.0;
    bool observed_defined = true;
    EmpiricalP p_upper, p_lower;
};

struct EnsembleSummary {
    NullModel model = NullModel::GSN;
    int samples_requested = 0;
    int samples_ok = 0;
    std::vector<std::string> sample_errors; // "sample 7: <message>"
    std::vector<StatSeries> stats;
};

// Runs generator + cascade + analytics per sample with counter-derived seeds;
// deterministic for a fixed master seed regardless of execution order.
// Statistics: sum_sizes, typical_nonzero, likelihood, avalanche_edges,
// avalanche_intra, forest_intra.
EnsembleSummary ensemble(const MacroNet& net, NullModel model, int samples,
                         CascadeParams params, std::uint64_t master_seed,
                         const GsnConfig* gsn_config = nullptr);

} // namespace crisisnet
