#include "crisisnet/randomize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_set>

#include "crisisnet/rng.hpp"

namespace crisisnet {

namespace {

struct IndexLink {
    int src, dst;
    double w;
};

std::vector<IndexLink> index_links(const MacroNet& net) {
    std::vector<IndexLink> links;
    links.reserve(static_cast<std::size_t>(net.link_count()));
    for (int i = 0; i < net.n(); ++i)
        for (const auto& a : net.out(i)) links.push_back({i, a.node, a.w});
    return links;
}

MacroNet rebuild(const MacroNet& base, const std::vector<IndexLink>& links) {
    std::vector<TradeLink> trades;
    trades.reserve(links.size());
    for (const IndexLink& l : links)
        trades.push_back({base.country(l.src).code, base.country(l.dst).code, l.w});
    return MacroNet::build(base.countries(), trades, base.capacity_mode());
}

inline std::uint64_t pair_key(int a, int b, int n) {
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) +
           static_cast<std::uint64_t>(b);
}

} // namespace

GsnSample gsn_sample(const MacroNet& net, const GsnConfig& config) {
    if (!(config.weight_tolerance > 0.0)) throw Error("gsn: weight tolerance must be positive");
    const std::uint64_t e = static_cast<std::uint64_t>(net.link_count());
    if (e < 2) throw Error("gsn: need at least 2 links");
    const std::uint64_t max_swaps =
        config.max_accepted_swaps > 0 ? config.max_accepted_swaps : 20 * e;
    const std::uint64_t max_attempts = config.max_attempts > 0 ? config.max_attempts : 200 * e;

    std::vector<IndexLink> links = index_links(net);
    const int n = net.n();
    std::unordered_set<std::uint64_t> present;
    present.reserve(links.size() * 2);
    for (const IndexLink& l : links) present.insert(pair_key(l.src, l.dst, n));

    Xoshiro256ss rng(config.rng_seed);
    std::uint64_t accepted = 0, attempts = 0;
    std::vector<std::uint64_t> accepted_at;
    while (attempts < max_attempts && accepted < max_swaps) {
        ++attempts;
        const std::uint64_t i1 = uniform_below(rng, e);
        const std::uint64_t i2 = uniform_below(rng, e);
        if (i1 == i2) continue;
        IndexLink& l1 = links[static_cast<std::size_t>(i1)];
        IndexLink& l2 = links[static_cast<std::size_t>(i2)];
        // relative weight difference must be below tolerance vs BOTH links'
        // original weights (weights are immutable, attached to their link)
        const double diff = std::fabs(l1.w - l2.w);
        if (!(diff / l1.w < config.weight_tolerance && diff / l2.w < config.weight_tolerance))
            continue;
        // retarget importers: (i->j, k->l) becomes (i->l, k->j)
        const int ni1_dst = l2.dst, ni2_dst = l1.dst;
        if (l1.src == ni1_dst || l2.src == ni2_dst) continue; // self-loop
        const std::uint64_t old1 = pair_key(l1.src, l1.dst, n);
        const std::uint64_t old2 = pair_key(l2.src, l2.dst, n);
        const std::uint64_t new1 = pair_key(l1.src, ni1_dst, n);
        const std::uint64_t new2 = pair_key(l2.src, ni2_dst, n);
        // duplicate ordered pair (ignoring the two slots being rewritten)
        if ((present.count(new1) && new1 != old1 && new1 != old2) ||
            (present.count(new2) && new2 != old1 && new2 != old2))
            continue;
        present.erase(old1);
        present.erase(old2);
        present.insert(new1);
        present.insert(new2);
        l1.dst = ni1_dst;
        l2.dst = ni2_dst;
        ++accepted;
        accepted_at.push_back(attempts);
    }
    return {rebuild(net, links), accepted, attempts, accepted == 0, std::move(accepted_at)};
}

GdnSample gdn_sample(const MacroNet& net, std::uint64_t rng_seed) {
    const int n = net.n();
    GdnSample out{MacroNet::build(net.countries(), {}, net.capacity_mode()), 0, 0, {}};

    // split links into 1 M$ unit stubs (round half up)
    std::vector<int> exp_stub, imp_stub;
    std::vector<std::uint64_t> exp_units(static_cast<std::size_t>(n), 0);
    std::vector<std::uint64_t> imp_units(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        for (const auto& a : net.out(i)) {
            const std::uint64_t units = static_cast<std::uint64_t>(std::floor(a.w + 0.5));
            if (units == 0) {
                ++out.dropped_links;
                out.warnings.push_back({0, Issue::Severity::WARNING,
                                        "gdn: link " + net.country(i).code + "->" +
                                            net.country(a.node).code +
                                            " rounds to zero units and was dropped"});
                continue;
            }
            exp_units[static_cast<std::size_t>(i)] += units;
            imp_units[static_cast<std::size_t>(a.node)] += units;
            for (std::uint64_t u = 0; u < units; ++u) {
                exp_stub.push_back(i);
                imp_stub.push_back(a.node);
            }
        }
    }
    const std::uint64_t total = exp_stub.size();
    out.total_units = total;
    if (total == 0) return out;

    // feasibility: a same-country-free matching exists iff no country holds
    // more units than the rest of the system can absorb
    for (int i = 0; i < n; ++i) {
        if (exp_units[static_cast<std::size_t>(i)] + imp_units[static_cast<std::size_t>(i)] > total)
            throw Error("gdn: country '" + net.country(i).code +
                        "' holds too many units for a self-loop-free matching");
    }

    Xoshiro256ss rng(rng_seed);
    shuffle(imp_stub, rng);
    // repair same-country collisions by swapping with a random position that
    // stays valid on both sides; one exists whenever the matching is feasible
    for (std::size_t p = 0; p < imp_stub.size(); ++p) {
        if (exp_stub[p] != imp_stub[p]) continue;
        bool fixed = false;
        for (std::uint64_t tries = 0; tries < 64 * total; ++tries) {
            const std::size_t q = static_cast<std::size_t>(uniform_below(rng, total));
            if (exp_stub[q] != imp_stub[p] && exp_stub[p] != imp_stub[q]) {
                std::swap(imp_stub[p], imp_stub[q]);
                fixed = true;
                break;
            }
        }
        if (!fixed) {
            // deterministic fallback scan (cannot fail for feasible inputs)
            for (std::size_t q = 0; q < imp_stub.size(); ++q) {
                if (exp_stub[q] != imp_stub[p] && exp_stub[p] != imp_stub[q]) {
                    std::swap(imp_stub[p], imp_stub[q]);
                    fixed = true;
                    break;
                }
            }
        }
        if (!fixed) throw Error("gdn: could not repair same-country pairing");
    }

    // merge parallel unit links
    std::map<std::pair<int, int>, std::uint64_t> merged;
    for (std::size_t p = 0; p < imp_stub.size(); ++p) merged[{exp_stub[p], imp_stub[p]}]++;
    std::vector<TradeLink> trades;
    trades.reserve(merged.size());
    for (const auto& [key, units] : merged) {
        trades.push_back({net.country(key.first).code, net.country(key.second).code,
                          static_cast<double>(units)});
    }
    out.net = MacroNet::build(net.countries(), trades, net.capacity_mode());
    return out;
}

std::string format_p(const EmpiricalP& p) {
    std::ostringstream os;
    if (p.is_bound) os << "< ";
    os << p.value;
    return os.str();
}

EmpiricalP empirical_p(double observed, const std::vector<double>& samples, Tail tail) {
    if (samples.empty()) throw Error("empirical_p: empty sample vector");
    long count = 0;
    for (double s : samples) {
        if (tail == Tail::UPPER ? s >= observed : s <= observed) ++count;
    }
    EmpiricalP p;
    if (count == 0) {
        p.value = 1.0 / static_cast<double>(samples.size());
        p.is_bound = true;
    } else {
        p.value = static_cast<double>(count) / static_cast<double>(samples.size());
    }
    return p;
}

const char* to_string(NullModel m) { return m == NullModel::GSN ? "gsn" : "gdn"; }

namespace {

struct SampleStats {
    double sum_sizes;
    std::optional<double> typical;
    double likelihood;
    double av_edges;
    double av_intra;
    double forest_intra;
};

SampleStats compute_stats(const MacroNet& net, CascadeParams params,
                          const std::map<std::string, std::string>& continents) {
    const auto results = run_all(net, params);
    const SummaryStats s = summary_stats(results);
    const AvalancheNetwork avnet = avalanche_network(results);
    const IntraFraction av_if = intra_continental_fraction(avnet.edges, continents);
    const SpanningForest forest = max_spanning_forest(net);
    std::vector<std::pair<std::string, std::string>> forest_edges;
    forest_edges.reserve(forest.edges.size());
    for (const ForestEdge& e : forest.edges) forest_edges.emplace_back(e.a, e.b);
    const IntraFraction f_if = intra_continental_fraction(forest_edges, continents);
    SampleStats out;
    out.sum_sizes = static_cast<double>(s.sum_sizes);
    out.typical = s.typical_nonzero;
    out.likelihood = s.likelihood;
    out.av_edges = static_cast<double>(avnet.edges.size());
    out.av_intra = static_cast<double>(av_if.intra);
    out.forest_intra = static_cast<double>(f_if.intra);
    return out;
}

void finalize(StatSeries& s) {
    double sum = 0.0;
    int n = 0;
    for (double v : s.values) {
        if (!std::isnan(v)) {
            sum += v;
            ++n;
        }
    }
    s.n_defined = n;
    if (n == 0) return;
    s.mean = sum / n;
    double var = 0.0;
    for (double v : s.values) {
        if (!std::isnan(v)) var += (v - s.mean) * (v - s.mean);
    }
    s.sd = std::sqrt(var / n);
    std::vector<double> defined;
    defined.reserve(static_cast<std::size_t>(n));
    for (double v : s.values)
        if (!std::isnan(v)) defined.push_back(v);
    if (s.observed_defined) {
        s.p_upper = empirical_p(s.observed, defined, Tail::UPPER);
        s.p_lower = empirical_p(s.observed, defined, Tail::LOWER);
    }
}

} // namespace

EnsembleSummary ensemble(const MacroNet& net, NullModel model, int samples,
                         CascadeParams params, std::uint64_t master_seed,
                         const GsnConfig* gsn_config) {
    if (samples < 1) throw Error("ensemble: need at least 1 sample");
    params.validate();
    const auto continents = continent_map(net);

    EnsembleSummary summary;
    summary.model = model;
    summary.samples_requested = samples;

    const char* names[6] = {"sum_sizes",       "typical_nonzero", "likelihood",
                            "avalanche_edges", "avalanche_intra", "forest_intra"};
    summary.stats.resize(6);
    for (int k = 0; k < 6; ++k) {
        summary.stats[static_cast<std::size_t>(k)].name = names[k];
        summary.stats[static_cast<std::size_t>(k)].values.assign(
            static_cast<std::size_t>(samples), std::nan(""));
    }

    const SampleStats observed = compute_stats(net, params, continents);
    const double obs[6] = {observed.sum_sizes,
                           observed.typical.value_or(std::nan("")),
                           observed.likelihood,
                           observed.av_edges,
                           observed.av_intra,
                           observed.forest_intra};
    for (int k = 0; k < 6; ++k) {
        auto& s = summary.stats[static_cast<std::size_t>(k)];
        s.observed = obs[k];
        s.observed_defined = !std::isnan(obs[k]);
    }

    for (int i = 0; i < samples; ++i) {
        const std::uint64_t seed = derive_sample_seed(master_seed, static_cast<std::uint64_t>(i));
        try {
            MacroNet sample_net = [&] {
                if (model == NullModel::GSN) {
                    GsnConfig cfg = gsn_config ? *gsn_config : GsnConfig{};
                    cfg.rng_seed = seed;
                    return gsn_sample(net, cfg).net;
                }
                return gdn_sample(net, seed).net;
            }();
            const SampleStats st = compute_stats(sample_net, params, continents);
            const double vals[6] = {st.sum_sizes,
                                    st.typical.value_or(std::nan("")),
                                    st.likelihood,
                                    st.av_edges,
                                    st.av_intra,
                                    st.forest_intra};
            for (int k = 0; k < 6; ++k)
                summary.stats[static_cast<std::size_t>(k)].values[static_cast<std::size_t>(i)] =
                    vals[k];
            ++summary.samples_ok;
        } catch (const Error& err) {
            summary.sample_errors.push_back("sample " + std::to_string(i) + ": " + err.what());
        }
    }
    for (auto& s : summary.stats) finalize(s);
    return summary;
}

} // namespace crisisnet
