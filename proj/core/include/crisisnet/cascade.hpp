#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crisisnet/macro_net.hpp"

namespace crisisnet {

struct CascadeParams {
    double f = 0.7; // fraction of original link weight removed by a collapse
    double t = 0.1; // collapse threshold as a fraction of node capacity

    void validate() const;
    double ratio() const { return f / t; }

    // Canonical (f, t) realization of a ratio: t = 0.1, f = 0.1*r for r <= 10,
    // else f = 1, t = 1/r. Only the ratio matters for the dynamics.
    static CascadeParams from_ratio(double r);
};

enum class Side { IN, OUT };
enum class Cause { DIRECT, INDIRECT };
enum class Label { ONE_STEP_DIRECT, MULTI_STEP_DIRECT, INDIRECT, RESIDUAL };

const char* to_string(Side s);
const char* to_string(Cause c);
const char* to_string(Label l);
Side side_from_string(const std::string& s);
Cause cause_from_string(const std::string& s);
Label label_from_string(const std::string& s);

struct CollapseEvent {
    std::string country;
    int step = 0;                       // cascade round, >= 1
    Side side = Side::IN;               // which strength total crossed
    Cause cause = Cause::INDIRECT;
    std::optional<std::string> trigger; // sufficient contributor when DIRECT
    Label label = Label::INDIRECT;
};

struct AvalancheResult {
    std::string seed;
    int size = 0;     // collapsed countries, seed excluded
    int duration = 0; // number of cascade rounds
    std::vector<CollapseEvent> events;   // ordered by (step, country code)
    std::array<int, 4> profile{};        // counts per Label, indexed by enum value
};

// Synchronous-round threshold cascade from one seed. Pure function of its
// arguments; results are bit-identical across runs.
AvalancheResult run_avalanche(const MacroNet& net, const std::string& seed, CascadeParams params);

// Independent cascade per country, keyed by seed code.
std::map<std::string, AvalancheResult> run_all(const MacroNet& net, CascadeParams params);

// (A, number of countries with avalanche size >= A) for A = 0..max size.
using CumulativeCurve = std::vector<std::pair<int, long>>;
CumulativeCurve cumulative_size_counts(const std::map<std::string, AvalancheResult>& results);
CumulativeCurve cumulative_counts_from_sizes(const std::vector<int>& sizes);

struct FitRange {
    int a_min = 1;
    int a_max = 1;
};

// Default window: A in [1, largest A with count >= 2].
FitRange default_fit_range(const CumulativeCurve& curve);

// Least-squares slope of log10(count) vs log10(A+1) over points with
// A in range and count > 0. Throws unless >= 3 distinct points qualify.
double tail_exponent(const CumulativeCurve& curve, FitRange range);

struct SweepRow {
    double ratio = 0.0;
    double f = 0.0, t = 0.0;
    int max_size = 0;
    long sum_sizes = 0;
    std::optional<double> tail_slope; // absent when the fit has too few points
    double decades = 0.0;             // log10(max_size + 1), horizontal span of the curve
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::optional<double> critical_ratio;          // argmin |tail_slope + 1|
    std::optional<double> subcritical_max_ratio;   // largest ratio with max < 5% of N
    std::optional<double> supercritical_min_ratio; // smallest ratio with max > 50% of N
    bool low_confidence = false; // single-point grid or no usable tail fits
};

SweepResult sweep(const MacroNet& net, const std::vector<double>& ratios);

// Logarithmic default grid used by the CLI: 30 points over [1, 30].
std::vector<double> log_ratio_grid(double lo, double hi, int points);

} // namespace crisisnet
