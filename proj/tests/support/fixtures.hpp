#pragma once

// Shared test fixtures: the hand-checked M2 network, the frozen S1 synthetic
// network, and a generator of small random digraphs for oracle sweeps.

#include <string>
#include <vector>

#include "crisisnet/macro_net.hpp"
#include "crisisnet/rng.hpp"
#include "crisisnet/synth.hpp"

namespace crisisnet::testing {

inline std::vector<Country> m2_countries() {
    return {
        {"A", "Alphaland", "X1", 100.0, {}},
        {"B", "Betaria", "X1", 10.0, {}},
        {"D", "Deltastan", "X1", 20.0, {}},
        {"E", "Epsilonia", "X2", 1000.0, {}},
        {"F", "Phiville", "X1", 5.0, {}},
    };
}

inline std::vector<TradeLink> m2_trades() {
    return {
        {"A", "B", 2.0}, {"A", "D", 1.6}, {"B", "D", 1.5},
        {"A", "E", 50.0}, {"E", "A", 60.0}, {"D", "F", 1.0},
    };
}

inline MacroNet m2_net(CapacityMode mode = CapacityMode::GDP_ONLY) {
    auto countries = m2_countries();
    if (mode == CapacityMode::GDP_PLUS_CAB)
        for (Country& c : countries) c.cab = 0.0;
    return MacroNet::build(std::move(countries), m2_trades(), mode);
}

// Frozen acceptance fixture S1: 200-node scale-free network with four planted
// continental blocks (~80% of volume intra-block). Seed pinned; regenerating
// with these constants is bit-reproducible.
inline SynthConfig s1_config() {
    SynthConfig cfg;
    cfg.n = 200;
    cfg.gamma = 2.3;
    cfg.kmin = 2;
    cfg.kmax = 50;
    cfg.blocks = 4;
    cfg.intra_bias = 0.9;
    cfg.capacity_sigma = 0.2068; // ±50% capacity band at one sigma: log(1.5)/1.96
    cfg.seed = 1;
    return cfg;
}

inline MacroNet s1_net() { return make_scale_free_net(s1_config()); }

// Random digraph for oracle equivalence: 2..max_n nodes, each ordered pair is
// a link with probability in [0.15, 0.5], weights and capacities on scales
// that make all four sweep ratios interesting.
inline MacroNet random_digraph(Xoshiro256ss& rng, int max_n = 12) {
    const int n = 2 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_n - 1)));
    const double p = 0.15 + 0.35 * rng.uniform01();
    std::vector<Country> countries;
    for (int i = 0; i < n; ++i) {
        const std::string code = synth_code(i);
        countries.push_back({code, code, "Z", 0.5 + 49.5 * rng.uniform01(), {}});
    }
    std::vector<TradeLink> trades;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || rng.uniform01() >= p) continue;
            trades.push_back({countries[static_cast<std::size_t>(i)].code,
                              countries[static_cast<std::size_t>(j)].code,
                              0.1 + 99.9 * rng.uniform01()});
        }
    return MacroNet::build(std::move(countries), trades, CapacityMode::GDP_ONLY);
}

} // namespace crisisnet::testing
