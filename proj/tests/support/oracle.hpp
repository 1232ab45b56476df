#pragma once

// Brute-force fixed-point cascade oracle. Recomputes every country's total
// decrement from scratch each round instead of maintaining incremental state;
// deliberately shares no code with the engine.

#include <map>
#include <set>
#include <string>

#include "crisisnet/cascade.hpp"
#include "crisisnet/macro_net.hpp"

namespace crisisnet::testing {

struct OracleResult {
    std::set<std::string> collapsed;      // seed excluded
    std::map<std::string, int> round_of;  // collapse round per country, >= 1
    int duration = 0;
};

OracleResult brute_force_cascade(const MacroNet& net, const std::string& seed,
                                 CascadeParams params);

} // namespace crisisnet::testing
