#include "crisisnet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "crisisnet/rng.hpp"

namespace crisisnet {

std::string synth_code(int i) {
    std::string code = "AAA";
    code[0] = static_cast<char>('A' + i / 676);
    code[1] = static_cast<char>('A' + (i / 26) % 26);
    code[2] = static_cast<char>('A' + i % 26);
    return code;
}

namespace {

// round to two significant digits, minimum 1 M$
double round_2sig(double x) {
    if (!(x > 0.0)) return 1.0;
    const double e = std::floor(std::log10(x));
    const double q = std::pow(10.0, e - 1.0);
    return std::max(1.0, std::floor(x / q + 0.5) * q);
}

} // namespace

SynthData make_scale_free(const SynthConfig& cfg) {
    if (cfg.n < 2 || cfg.kmin < 1 || cfg.kmax < cfg.kmin || cfg.gamma <= 1.0)
        throw Error("synth: invalid configuration");
    if (cfg.blocks < 0 || cfg.blocks > cfg.n) throw Error("synth: invalid block count");

    const int n = cfg.n;
    Xoshiro256ss rng(cfg.seed);

    // power-law out-degrees: k = kmin * u^(-1/(gamma-1)), clamped
    std::vector<int> deg(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        const double kk = cfg.kmin * std::pow(u, -1.0 / (cfg.gamma - 1.0));
        const int k = static_cast<int>(std::min(kk, static_cast<double>(cfg.kmax)));
        deg[static_cast<std::size_t>(i)] = std::clamp(k, cfg.kmin, cfg.kmax);
    }
    const std::vector<int>& mass = deg; // attachment mass = target out-degree

    std::vector<int> block(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(std::max(cfg.blocks, 1)));
    for (int i = 0; i < n; ++i) {
        if (cfg.blocks > 0) block[static_cast<std::size_t>(i)] = i * cfg.blocks / n;
        members[static_cast<std::size_t>(block[static_cast<std::size_t>(i)])].push_back(i);
    }

    SynthData data;
    for (int i = 0; i < n; ++i) {
        std::set<int> targets;
        int tries = 0;
        while (static_cast<int>(targets.size()) < deg[static_cast<std::size_t>(i)] &&
               tries < 8000) {
            ++tries;
            int cand;
            if (cfg.blocks > 0 && rng.uniform01() < cfg.intra_bias) {
                const auto& pool = members[static_cast<std::size_t>(block[static_cast<std::size_t>(i)])];
                cand = pool[uniform_below(rng, pool.size())];
            } else {
                cand = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n)));
            }
            // mass-weighted acceptance
            if (rng.uniform01() * cfg.kmax > mass[static_cast<std::size_t>(cand)]) continue;
            if (cand == i || targets.count(cand)) continue;
            targets.insert(cand);
        }
        for (int j : targets) {
            const double base = std::pow(
                static_cast<double>(mass[static_cast<std::size_t>(i)]) *
                    static_cast<double>(mass[static_cast<std::size_t>(j)]),
                0.75);
            const double vol = round_2sig(base * std::exp(gaussian(rng)));
            data.trades.push_back({synth_code(i), synth_code(j), vol});
        }
    }

    std::vector<double> strength(static_cast<std::size_t>(n), 0.0);
    for (const TradeLink& l : data.trades) {
        // codes are index-monotone, so decode rather than search
        const int s = (l.exporter[0] - 'A') * 676 + (l.exporter[1] - 'A') * 26 + (l.exporter[2] - 'A');
        const int d = (l.importer[0] - 'A') * 676 + (l.importer[1] - 'A') * 26 + (l.importer[2] - 'A');
        strength[static_cast<std::size_t>(s)] += l.volume;
        strength[static_cast<std::size_t>(d)] += l.volume;
    }
    for (int i = 0; i < n; ++i) {
        Country c;
        c.code = synth_code(i);
        c.name = c.code;
        c.continent = "B" + std::to_string(block[static_cast<std::size_t>(i)]);
        c.gdp = std::max(1e-9, strength[static_cast<std::size_t>(i)]) *
                std::exp(gaussian(rng) * cfg.capacity_sigma);
        data.countries.push_back(std::move(c));
    }
    return data;
}

MacroNet make_scale_free_net(const SynthConfig& cfg) {
    SynthData data = make_scale_free(cfg);
    return MacroNet::build(std::move(data.countries), data.trades, CapacityMode::GDP_ONLY);
}

} // namespace crisisnet
