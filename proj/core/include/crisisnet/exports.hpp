#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "crisisnet/analytics.hpp"
#include "crisisnet/cascade.hpp"
#include "crisisnet/macro_net.hpp"
#include "crisisnet/randomize.hpp"

namespace crisisnet {

// results.csv: seed,size,duration,n_one_step_direct,n_multi_step_direct,n_indirect,n_residual
void write_results_csv(std::ostream& out, const std::map<std::string, AvalancheResult>& results);

// events.csv: seed,country,step,side,cause,trigger,label (trigger empty for INDIRECT)
void write_events_csv(std::ostream& out, const std::map<std::string, AvalancheResult>& results);

struct EventRow {
    std::string seed;
    CollapseEvent event;
};

// Re-parses an events.csv (e.g. to rebuild the avalanche network without
// re-running the cascade).
std::vector<EventRow> read_events_csv(std::istream& in);
std::map<std::string, AvalancheResult> results_from_events(const std::vector<std::string>& all_codes,
                                                           const std::vector<EventRow>& rows);

// distribution.csv: avalanche_size,countries_ge  (cumulative counts)
void write_distribution_csv(std::ostream& out, const CumulativeCurve& curve);

// tgp.csv: partner,partner_gdp_musd,trade_volume_musd,collapsed
void write_tgp_csv(std::ostream& out, const std::vector<TgpPoint>& points);

// sweep.csv: ratio,f,t,max_size,sum_sizes,tail_slope,decades (slope empty when absent)
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

// durations.csv: duration,count  (histogram over countries)
void write_durations_csv(std::ostream& out, const std::map<std::string, AvalancheResult>& results);

// gdp_size.csv: code,continent,gdp_musd,capacity_musd,size — scatter data for
// the GDP vs avalanche-size correlation
void write_gdp_size_csv(std::ostream& out, const MacroNet& net,
                        const std::map<std::string, AvalancheResult>& results);

// profile_totals.csv: label,count — aggregate four-way sub-process profile
void write_profile_totals_csv(std::ostream& out,
                              const std::map<std::string, AvalancheResult>& results);

// DOT exports. Nodes carry continent="..", edges intra=true|false; forest
// edges also carry weight.
void write_avalanche_dot(std::ostream& out, const AvalancheNetwork& avnet,
                         const std::map<std::string, std::string>& continent_of);
void write_forest_dot(std::ostream& out, const SpanningForest& forest,
                      const std::map<std::string, std::string>& continent_of);

// JSON payloads (nlohmann kept out of public headers; all keys sorted, no
// timestamps — byte-stable across reruns).
std::string coarse_to_json(const std::vector<CoarseEdge>& edges);
std::string intra_to_json(const IntraFraction& forest, const IntraFraction& avalanche);
std::string ensemble_to_json(const EnsembleSummary& summary);
void write_ensemble_samples_csv(std::ostream& out, const EnsembleSummary& summary);

} // namespace crisisnet
