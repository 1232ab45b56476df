#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crisisnet/cascade.hpp"
#include "crisisnet/macro_net.hpp"

namespace crisisnet {

// One point of a trade volume-GDP profile: a trading partner of the profiled
// country, with the bilateral volume and whether the profiled country's
// avalanche took the partner down.
struct TgpPoint {
    std::string partner;
    double partner_gdp = 0.0;
    double trade_volume = 0.0; // W(c->p) + W(p->c)
    bool collapsed_by_profiled = false;
};

std::vector<TgpPoint> tgp_profile(const MacroNet& net, const AvalancheResult& result);

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 1.0; // two-sided, t approximation with n-2 dof
};

// Pearson correlation of mid-ranks. Throws on n < 3 or a constant vector.
SpearmanResult spearman_gdp_avalanche(const std::vector<double>& gdps,
                                      const std::vector<double>& sizes);

struct ForestEdge {
    std::string a, b; // a < b lexicographically
    double weight = 0.0; // symmetrized W(a,b) + W(b,a)
};

struct SpanningForest {
    std::vector<ForestEdge> edges; // in Kruskal acceptance order
    int n_nodes = 0;
    int n_components = 0; // |edges| == n_nodes - n_components
};

// Maximum-total-weight spanning forest of the symmetrized network.
SpanningForest max_spanning_forest(const MacroNet& net);

// Directed graph with an edge i->j iff j belongs to i's avalanche.
struct AvalancheNetwork {
    std::vector<std::string> nodes;                         // all codes, sorted
    std::vector<std::pair<std::string, std::string>> edges; // sorted (src, dst)
    std::vector<std::string> isolated;                      // no in- and no out-edges
};

AvalancheNetwork avalanche_network(const std::map<std::string, AvalancheResult>& results);

struct IntraFraction {
    long intra = 0;
    long total = 0;
    std::optional<double> fraction; // absent when total == 0
};

// Works for both directed (avalanche) and undirected (forest) edge lists.
IntraFraction intra_continental_fraction(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::map<std::string, std::string>& continent_of);

std::map<std::string, std::string> continent_map(const MacroNet& net);

struct CoarseEdge {
    std::string from, to;
    long weight = 0; // number of avalanche edges between the two continents
};

// Continent-level coarse-graining of the avalanche network (self-edges kept).
std::vector<CoarseEdge> coarse_grain_continental(
    const AvalancheNetwork& avnet, const std::map<std::string, std::string>& continent_of);

struct SummaryStats {
    long sum_sizes = 0;
    std::optional<double> typical_nonzero; // mean size over nonzero avalanches
    double likelihood = 0.0;               // fraction of countries with size > 0
    int n_countries = 0;
    int n_nonzero = 0;
};

SummaryStats summary_stats(const std::map<std::string, AvalancheResult>& results);

} // namespace crisisnet
