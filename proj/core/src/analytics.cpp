#include "crisisnet/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <boost/math/distributions/students_t.hpp>

namespace crisisnet {

std::vector<TgpPoint> tgp_profile(const MacroNet& net, const AvalancheResult& result) {
    const int c = net.require_index(result.seed);
    std::set<std::string> collapsed;
    for (const CollapseEvent& ev : result.events) collapsed.insert(ev.country);

    // bilateral volume per partner (union of in- and out-neighbors)
    std::map<int, double> partner_volume;
    for (const auto& a : net.out(c)) partner_volume[a.node] += a.w;
    for (const auto& a : net.in(c)) partner_volume[a.node] += a.w;

    std::vector<TgpPoint> points;
    points.reserve(partner_volume.size());
    for (const auto& [p, vol] : partner_volume) {
        TgpPoint pt;
        pt.partner = net.country(p).code;
        pt.partner_gdp = net.country(p).gdp;
        pt.trade_volume = vol;
        pt.collapsed_by_profiled = collapsed.count(pt.partner) > 0;
        points.push_back(std::move(pt));
    }
    return points;
}

namespace {

std::vector<double> midranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double mid = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        i = j + 1;
    }
    return rank;
}

} // namespace

SpearmanResult spearman_gdp_avalanche(const std::vector<double>& gdps,
                                      const std::vector<double>& sizes) {
    const std::size_t n = gdps.size();
    if (sizes.size() != n) throw Error("spearman: input vectors differ in length");
    if (n < 3) throw Error("spearman: need at least 3 observations");

    const std::vector<double> rx = midranks(gdps);
    const std::vector<double> ry = midranks(sizes);
    const double mean = (static_cast<double>(n) + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error("spearman: constant input vector, correlation undefined");

    SpearmanResult res;
    res.rho = sxy / std::sqrt(sxx * syy);
    // numerical safety: clamp to [-1, 1]
    res.rho = std::clamp(res.rho, -1.0, 1.0);
    if (std::fabs(res.rho) >= 1.0) {
        res.p_value = 0.0;
        return res;
    }
    const double dof = static_cast<double>(n) - 2.0;
    const double tstat = res.rho * std::sqrt(dof / (1.0 - res.rho * res.rho));
    boost::math::students_t dist(dof);
    res.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(tstat)));
    return res;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(a)] = b;
        return true;
    }
};

} // namespace

SpanningForest max_spanning_forest(const MacroNet& net) {
    const int n = net.n();
    // symmetrize: undirected weight = W(i,j) + W(j,i), keyed by (min, max) index
    std::map<std::pair<int, int>, double> undirected;
    for (int i = 0; i < n; ++i) {
        for (const auto& a : net.out(i)) {
            const auto key = std::minmax(i, a.node);
            undirected[{key.first, key.second}] += a.w;
        }
    }
    struct E {
        int a, b;
        double w;
    };
    std::vector<E> edges;
    edges.reserve(undirected.size());
    for (const auto& [key, w] : undirected) edges.push_back({key.first, key.second, w});
    // weight descending; ties by (min code, max code) ascending — node indices
    // are already in code order
    std::sort(edges.begin(), edges.end(), [](const E& x, const E& y) {
        if (x.w != y.w) return x.w > y.w;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    SpanningForest forest;
    forest.n_nodes = n;
    UnionFind uf(n);
    int components = n;
    for (const E& e : edges) {
        if (uf.unite(e.a, e.b)) {
            forest.edges.push_back({net.country(e.a).code, net.country(e.b).code, e.w});
            --components;
        }
    }
    forest.n_components = components;
    return forest;
}

AvalancheNetwork avalanche_network(const std::map<std::string, AvalancheResult>& results) {
    AvalancheNetwork avnet;
    std::set<std::string> has_edge;
    for (const auto& [seed, r] : results) {
        avnet.nodes.push_back(seed);
        for (const CollapseEvent& ev : r.events) {
            avnet.edges.emplace_back(seed, ev.country);
            has_edge.insert(seed);
            has_edge.insert(ev.country);
        }
    }
    std::sort(avnet.edges.begin(), avnet.edges.end());
    for (const std::string& code : avnet.nodes)
        if (!has_edge.count(code)) avnet.isolated.push_back(code);
    return avnet;
}

std::map<std::string, std::string> continent_map(const MacroNet& net) {
    std::map<std::string, std::string> m;
    for (const Country& c : net.countries()) m[c.code] = c.continent;
    return m;
}

IntraFraction intra_continental_fraction(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::map<std::string, std::string>& continent_of) {
    IntraFraction out;
    for (const auto& [a, b] : edges) {
        const auto ia = continent_of.find(a);
        const auto ib = continent_of.find(b);
        if (ia == continent_of.end() || ib == continent_of.end())
            throw Error("missing continent tag for '" +
                        (ia == continent_of.end() ? a : b) + "'");
        ++out.total;
        if (ia->second == ib->second) ++out.intra;
    }
    if (out.total > 0)
        out.fraction = static_cast<double>(out.intra) / static_cast<double>(out.total);
    return out;
}

std::vector<CoarseEdge> coarse_grain_continental(
    const AvalancheNetwork& avnet, const std::map<std::string, std::string>& continent_of) {
    std::map<std::pair<std::string, std::string>, long> flow;
    for (const auto& [src, dst] : avnet.edges) {
        const auto is = continent_of.find(src);
        const auto id = continent_of.find(dst);
        if (is == continent_of.end() || id == continent_of.end())
            throw Error("missing continent tag for '" +
                        (is == continent_of.end() ? src : dst) + "'");
        flow[{is->second, id->second}]++;
    }
    std::vector<CoarseEdge> out;
    out.reserve(flow.size());
    for (const auto& [key, w] : flow) out.push_back({key.first, key.second, w});
    return out;
}

SummaryStats summary_stats(const std::map<std::string, AvalancheResult>& results) {
    if (results.empty()) throw Error("summary_stats: empty results");
    SummaryStats s;
    s.n_countries = static_cast<int>(results.size());
    for (const auto& [_, r] : results) {
        s.sum_sizes += r.size;
        if (r.size > 0) ++s.n_nonzero;
    }
    if (s.n_nonzero > 0)
        s.typical_nonzero = static_cast<double>(s.sum_sizes) / static_cast<double>(s.n_nonzero);
    s.likelihood = static_cast<double>(s.n_nonzero) / static_cast<double>(s.n_countries);
    return s;
}

} // namespace crisisnet
