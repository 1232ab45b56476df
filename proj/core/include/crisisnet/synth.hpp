#pragma once

#include <cstdint>
#include <vector>

#include "crisisnet/macro_net.hpp"

namespace crisisnet {

// Synthetic scale-free weighted trade network ("S1"): power-law out-degrees,
// mass-weighted partner attachment, gravity-like volumes rounded to two
// significant digits (so near-equal weights exist for GSN swaps), capacities
// proportional to node strength with lognormal noise. With blocks > 0,
// partners are drawn from the node's own block with probability intra_bias,
// planting continental clustering.
struct SynthConfig {
    int n = 200;
    double gamma = 2.3;       // degree exponent
    int kmin = 2;
    int kmax = 50;
    int blocks = 0;           // 0 -> single continent
    double intra_bias = 0.9;  // P(partner drawn from own block) when blocks > 0
    double capacity_sigma = 0.2068; // lognormal sigma: ~50% spread around strength
    std::uint64_t seed = 1;
};

struct SynthData {
    std::vector<Country> countries;
    std::vector<TradeLink> trades;
};

SynthData make_scale_free(const SynthConfig& config);
MacroNet make_scale_free_net(const SynthConfig& config);

// Three-letter base-26 code for node i: 0 -> "AAA", 1 -> "AAB", ...
std::string synth_code(int i);

} // namespace crisisnet
